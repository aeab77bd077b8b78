#include "blockcert/comparison.hpp"

#include <stdexcept>
#include <string>

#include "blockcert/linalg.hpp"

namespace blockcert {

namespace {

void require_hurwitz_blocks(const Matrix& A, const Partition& partition, const char* who) {
    for (int i = 0; i < partition.count(); ++i) {
        Matrix Aii = extract_block(A, partition, partition, i, i);
        if (!is_hurwitz(Aii, kHurwitzGuard)) {
            throw std::invalid_argument(std::string(who) + ": diagonal block " +
                                        std::to_string(i + 1) + " is not Hurwitz");
        }
    }
}

}  // namespace

Matrix comparison_matrix(const Matrix& A, const Partition& partition, ComparisonVariant variant,
                         double tol) {
    if (A.rows() != A.cols() || A.rows() != partition.total()) {
        throw std::invalid_argument("comparison_matrix: partition does not match A");
    }
    const int n = partition.count();
    if (variant != ComparisonVariant::N_ALPHA) require_hurwitz_blocks(A, partition, "comparison_matrix");

    Matrix M(n, n);
    for (int i = 0; i < n; ++i) {
        const int ki = partition.size(i);
        Matrix Aii = extract_block(A, partition, partition, i, i);
        switch (variant) {
            case ComparisonVariant::M_ALPHA:
                M(i, i) = -1.0;
                break;
            case ComparisonVariant::MTILDE_ALPHA:
                M(i, i) = -1.0 / hinf_norm(Aii, Matrix::Identity(ki, ki),
                                           Matrix::Identity(ki, ki), Matrix::Zero(ki, ki), tol);
                break;
            case ComparisonVariant::N_ALPHA:
                M(i, i) = std::min(log_norm_mu2(Aii), 0.0);
                break;
        }
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Matrix Aij = extract_block(A, partition, partition, i, j);
            if (variant == ComparisonVariant::M_ALPHA) {
                M(i, j) = Aij.isZero(0.0)
                              ? 0.0
                              : hinf_norm(Aii, Aij, Matrix::Identity(ki, ki),
                                          Matrix::Zero(ki, partition.size(j)), tol);
            } else {
                M(i, j) = max_singular_value(Aij);
            }
        }
    }
    return M;
}

PositiveSystem comparison_system_hard(const PartitionedSystem& sys, double tol) {
    ValidationReport rep = validate(sys);
    if (!rep.dimensions_ok) {
        throw std::invalid_argument("comparison_system_hard: " + rep.message);
    }
    if (!rep.all_diagonal_blocks_hurwitz) {
        throw std::invalid_argument("comparison_system_hard: " + rep.message);
    }
    const Partition& ap = sys.state_partition;
    const Partition& ip = sys.input_partition;
    const Partition& op = sys.output_partition;
    const int n = ap.count(), ni = ip.count(), no = op.count();

    PositiveSystem ps;
    ps.F = comparison_matrix(sys.A, ap, ComparisonVariant::M_ALPHA, tol);
    ps.G.resize(n, ni);
    for (int i = 0; i < n; ++i) {
        const int ki = ap.size(i);
        Matrix Aii = extract_block(sys.A, ap, ap, i, i);
        for (int l = 0; l < ni; ++l) {
            Matrix Bil = extract_block(sys.B, ap, ip, i, l);
            ps.G(i, l) = Bil.isZero(0.0) ? 0.0
                                         : hinf_norm(Aii, Bil, Matrix::Identity(ki, ki),
                                                     Matrix::Zero(ki, ip.size(l)), tol);
        }
    }
    ps.H.resize(no, n);
    for (int k = 0; k < no; ++k)
        for (int j = 0; j < n; ++j)
            ps.H(k, j) = max_singular_value(extract_block(sys.C, op, ap, k, j));
    ps.J.resize(no, ni);
    for (int k = 0; k < no; ++k)
        for (int l = 0; l < ni; ++l)
            ps.J(k, l) = max_singular_value(extract_block(sys.D, op, ip, k, l));
    ps.check();
    return ps;
}

PositiveSystem comparison_system_simple(const PartitionedSystem& sys) {
    ValidationReport rep = validate(sys);
    if (!rep.dimensions_ok) {
        throw std::invalid_argument("comparison_system_simple: " + rep.message);
    }
    const Partition& ap = sys.state_partition;
    const Partition& ip = sys.input_partition;
    const Partition& op = sys.output_partition;
    const int n = ap.count(), ni = ip.count(), no = op.count();

    PositiveSystem ps;
    ps.F = comparison_matrix(sys.A, ap, ComparisonVariant::N_ALPHA);
    ps.G.resize(n, ni);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < ni; ++l)
            ps.G(i, l) = max_singular_value(extract_block(sys.B, ap, ip, i, l));
    ps.H.resize(no, n);
    for (int k = 0; k < no; ++k)
        for (int j = 0; j < n; ++j)
            ps.H(k, j) = max_singular_value(extract_block(sys.C, op, ap, k, j));
    ps.J.resize(no, ni);
    for (int k = 0; k < no; ++k)
        for (int l = 0; l < ni; ++l)
            ps.J(k, l) = max_singular_value(extract_block(sys.D, op, ip, k, l));
    ps.check();
    return ps;
}

}  // namespace blockcert
