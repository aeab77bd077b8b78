#include "blockcert/network.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "blockcert/linalg.hpp"

namespace blockcert {

namespace {

double lambda_max_sym(const Matrix& S) {
    if (S.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Matrix psd_sqrt(const Matrix& Z) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Z + Z.transpose()));
    Vector vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Partition NetworkModel::internal_input_partition() const {
    std::vector<int> sizes;
    sizes.reserve(subsystems.size());
    for (const auto& sub : subsystems) sizes.push_back(sub.inputs());
    return Partition(sizes);
}

Partition NetworkModel::internal_output_partition() const {
    std::vector<int> sizes;
    sizes.reserve(subsystems.size());
    for (const auto& sub : subsystems) sizes.push_back(sub.outputs());
    return Partition(sizes);
}

void NetworkModel::check() const {
    if (subsystems.empty()) throw std::invalid_argument("NetworkModel: no subsystems");
    for (size_t i = 0; i < subsystems.size(); ++i) {
        const auto& sub = subsystems[i];
        if (sub.A.rows() != sub.A.cols() || sub.B.rows() != sub.A.rows() ||
            sub.C.cols() != sub.A.cols()) {
            throw std::invalid_argument("NetworkModel: subsystem " + std::to_string(i + 1) +
                                        " has inconsistent dimensions");
        }
        if (!is_hurwitz(sub.A, kHurwitzGuard)) {
            throw std::invalid_argument("NetworkModel: subsystem " + std::to_string(i + 1) +
                                        " is not Hurwitz");
        }
    }
    Partition inp = internal_input_partition();
    Partition outp = internal_output_partition();
    if (M.rows() != inp.total() || M.cols() != outp.total()) {
        throw std::invalid_argument("NetworkModel: M must be (sum inputs) x (sum outputs)");
    }
    if (K.rows() != inp.total() || K.cols() != external_input_partition.total()) {
        throw std::invalid_argument("NetworkModel: K does not match the external input partition");
    }
    if (N.cols() != outp.total() || N.rows() != external_output_partition.total()) {
        throw std::invalid_argument("NetworkModel: N does not match the external output partition");
    }
    for (int i = 0; i < static_cast<int>(subsystems.size()); ++i) {
        if (!extract_block(M, inp, outp, i, i).isZero(0.0)) {
            throw std::invalid_argument("NetworkModel: diagonal block M_" + std::to_string(i + 1) +
                                        std::to_string(i + 1) + " must be zero");
        }
    }
}

PositiveSystem network_comparison_system(const NetworkModel& net, double tol) {
    net.check();
    const int n = static_cast<int>(net.subsystems.size());
    const Partition inp = net.internal_input_partition();
    const Partition outp = net.internal_output_partition();
    const int ni = net.external_input_partition.count();
    const int no = net.external_output_partition.count();

    PositiveSystem ps;
    ps.F = -Matrix::Identity(n, n);
    ps.G = Matrix::Zero(n, ni);
    for (int i = 0; i < n; ++i) {
        const auto& sub = net.subsystems[static_cast<size_t>(i)];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Matrix Mij = extract_block(net.M, inp, outp, i, j);
            if (Mij.isZero(0.0)) continue;
            ps.F(i, j) = hinf_norm(sub.A, sub.B * Mij, sub.C,
                                   Matrix::Zero(sub.outputs(), Mij.cols()), tol);
        }
        for (int l = 0; l < ni; ++l) {
            Matrix Kil = extract_block(net.K, inp, net.external_input_partition, i, l);
            if (Kil.isZero(0.0)) continue;
            ps.G(i, l) = hinf_norm(sub.A, sub.B * Kil, sub.C,
                                   Matrix::Zero(sub.outputs(), Kil.cols()), tol);
        }
    }
    ps.H = Matrix::Zero(no, n);
    for (int k = 0; k < no; ++k)
        for (int j = 0; j < n; ++j)
            ps.H(k, j) =
                max_singular_value(extract_block(net.N, net.external_output_partition, outp, k, j));
    ps.J = Matrix::Zero(no, ni);
    ps.check();
    return ps;
}

PositiveSystem network_comparison_decoupled(const NetworkModel& net, double tol) {
    net.check();
    const int n = static_cast<int>(net.subsystems.size());
    const Partition inp = net.internal_input_partition();
    const Partition outp = net.internal_output_partition();
    const int ni = net.external_input_partition.count();
    const int no = net.external_output_partition.count();

    PositiveSystem ps;
    ps.F = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const auto& sub = net.subsystems[static_cast<size_t>(i)];
        double gain = hinf_norm(sub.A, sub.B, sub.C, Matrix::Zero(sub.outputs(), sub.inputs()), tol);
        if (gain <= 0.0) {
            throw std::invalid_argument("network_comparison_decoupled: subsystem " +
                                        std::to_string(i + 1) + " has zero gain");
        }
        ps.F(i, i) = -1.0 / gain;
        for (int j = 0; j < n; ++j) {
            if (j != i) ps.F(i, j) = max_singular_value(extract_block(net.M, inp, outp, i, j));
        }
    }
    ps.G = Matrix::Zero(n, ni);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < ni; ++l)
            ps.G(i, l) =
                max_singular_value(extract_block(net.K, inp, net.external_input_partition, i, l));
    ps.H = Matrix::Zero(no, n);
    for (int k = 0; k < no; ++k)
        for (int j = 0; j < n; ++j)
            ps.H(k, j) =
                max_singular_value(extract_block(net.N, net.external_output_partition, outp, k, j));
    ps.J = Matrix::Zero(no, ni);
    ps.check();
    return ps;
}

PartitionedSystem assemble_closed_loop(const NetworkModel& net) {
    net.check();
    const int n = static_cast<int>(net.subsystems.size());
    const Partition inp = net.internal_input_partition();
    const Partition outp = net.internal_output_partition();

    std::vector<int> state_sizes;
    state_sizes.reserve(static_cast<size_t>(n));
    for (const auto& sub : net.subsystems) state_sizes.push_back(sub.states());
    Partition sp(state_sizes);

    PartitionedSystem sys;
    sys.state_partition = sp;
    sys.input_partition = net.external_input_partition;
    sys.output_partition = net.external_output_partition;
    const int N = sp.total();
    const int Ni = net.external_input_partition.total();
    const int No = net.external_output_partition.total();
    sys.A = Matrix::Zero(N, N);
    sys.B = Matrix::Zero(N, Ni);
    sys.C = Matrix::Zero(No, N);
    sys.D = Matrix::Zero(No, Ni);

    for (int i = 0; i < n; ++i) {
        const auto& si = net.subsystems[static_cast<size_t>(i)];
        sys.A.block(sp.offset(i), sp.offset(i), si.states(), si.states()) = si.A;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto& sj = net.subsystems[static_cast<size_t>(j)];
            Matrix Mij = extract_block(net.M, inp, outp, i, j);
            sys.A.block(sp.offset(i), sp.offset(j), si.states(), sj.states()) = si.B * Mij * sj.C;
        }
        sys.B.middleRows(sp.offset(i), si.states()) = si.B * net.K.middleRows(inp.offset(i), si.inputs());
        sys.C.middleCols(sp.offset(i), si.states()) = net.N.middleCols(outp.offset(i), si.outputs()) * si.C;
    }
    return sys;
}

NetworkCertificate network_hinf_certificate(const NetworkModel& net, std::optional<double> delta,
                                            double tol) {
    NetworkCertificate cert;
    net.check();
    const int n = static_cast<int>(net.subsystems.size());
    const Partition inp = net.internal_input_partition();
    const Partition outp = net.internal_output_partition();
    const int ni = net.external_input_partition.count();

    PositiveSystem ps = network_comparison_system(net, tol);
    if (!is_hurwitz(ps.F, kHurwitzGuard)) {
        cert.status = CertifyStatus::ComparisonUnstable;
        cert.message = "network comparison matrix is not Hurwitz (abscissa " +
                       std::to_string(spectral_abscissa(ps.F)) + ")";
        return cert;
    }
    cert.comparison_norm = positive_hinf_norm(ps);
    double level = delta.has_value()
                       ? *delta
                       : (cert.comparison_norm > 0.0 ? 1.001 * cert.comparison_norm : 1.0);
    if (level <= cert.comparison_norm) {
        cert.status = CertifyStatus::DeltaBelowComparisonNorm;
        cert.message = "requested delta is not above the comparison norm " +
                       std::to_string(cert.comparison_norm);
        return cert;
    }
    cert.delta = level;

    std::optional<ScalingVectors> sv = solve_scaling_lp(ps, level);
    if (!sv.has_value()) {
        cert.status = CertifyStatus::DeltaBelowComparisonNorm;
        cert.message = "scaling LP infeasible at delta = " + std::to_string(level);
        return cert;
    }
    cert.scalings = *sv;

    // Prop.-4 scalars on the network comparison system (F_ii = -1).
    cert.supply_Y11 = Vector(n);
    cert.blocks.resize(static_cast<size_t>(n));
    cert.supply_Y22.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& sub = net.subsystems[static_cast<size_t>(i)];
        const double phi_ii = sv->e(i) / sv->d(i);
        cert.supply_Y11(i) = phi_ii;

        Matrix Z = Matrix::Zero(sub.inputs(), sub.inputs());
        for (int j = 0; j < n; ++j) {
            if (j == i || ps.F(i, j) <= 0.0) continue;
            Matrix Mij = extract_block(net.M, inp, outp, i, j);
            double phi_ij = ps.F(i, j) * sv->e(i) / sv->d(j);
            Z += Mij * Mij.transpose() / phi_ij;
        }
        for (int l = 0; l < ni; ++l) {
            if (ps.G(i, l) <= 0.0) continue;
            Matrix Kil = extract_block(net.K, inp, net.external_input_partition, i, l);
            double gamma_il = ps.G(i, l) * sv->e(i) / sv->f(l);
            Z += Kil * Kil.transpose() / gamma_il;
        }

        Matrix Q0 = phi_ii * sub.C.transpose() * sub.C;
        double eps_i;
        if (Z.isZero(0.0)) {
            eps_i = 1e-3 * (1.0 + Q0.cwiseAbs().maxCoeff());
            cert.blocks[static_cast<size_t>(i)] =
                solve_lyapunov(sub.A, Q0 + eps_i * Matrix::Identity(sub.states(), sub.states()));
            cert.supply_Y22[static_cast<size_t>(i)] =
                1e6 * (1.0 + Q0.cwiseAbs().maxCoeff()) * Matrix::Identity(sub.inputs(), sub.inputs());
        } else {
            Matrix Zh = psd_sqrt(Z);
            Matrix BZ = sub.B * Zh;
            double nu = hinf_norm(sub.A, BZ, std::sqrt(phi_ii) * sub.C,
                                  Matrix::Zero(sub.outputs(), BZ.cols()), tol);
            if (!(nu < 1.0)) {
                throw std::runtime_error("network_hinf_certificate: small-gain bound violated "
                                         "(nu = " + std::to_string(nu) + ")");
            }
            double rho = hinf_norm(sub.A, BZ, Matrix::Identity(sub.states(), sub.states()),
                                   Matrix::Zero(sub.states(), BZ.cols()), tol);
            eps_i = 0.5 * (1.0 - nu * nu) / std::max(rho * rho, 1e-300);
            eps_i = std::min(eps_i, 1e6 * (1.0 + Q0.cwiseAbs().maxCoeff()));
            Matrix R = BZ * BZ.transpose();
            cert.blocks[static_cast<size_t>(i)] = solve_riccati(
                sub.A, R, Q0 + eps_i * Matrix::Identity(sub.states(), sub.states()));

            // Supply rate Y22 with (Y22)^{-1} = Z + theta I strictly above Z,
            // theta small enough that the dissipation LMI keeps its margin.
            const Matrix& Pi = cert.blocks[static_cast<size_t>(i)];
            double btp = max_singular_value(sub.B.transpose() * Pi);
            double theta = 0.5 * eps_i / std::max(btp * btp, 1e-300);
            Matrix Zinv = Z + theta * Matrix::Identity(sub.inputs(), sub.inputs());
            cert.supply_Y22[static_cast<size_t>(i)] = Zinv.inverse();
        }
    }

    PartitionedSystem closed = assemble_closed_loop(net);
    Matrix P = assemble_blockdiag(cert.blocks);
    cert.min_block_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& blk : cert.blocks) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(blk, Eigen::EigenvaluesOnly);
        cert.min_block_eigenvalue = std::min(cert.min_block_eigenvalue, es.eigenvalues().minCoeff());
    }
    cert.lyapunov_residual = verify_lyapunov_lmi(closed.A, P);
    cert.riccati_residual = verify_riccati_lmi(closed.A, closed.B, closed.C, closed.D, P, level);

    const double scale = 1.0 + closed.A.cwiseAbs().maxCoeff();
    if (cert.min_block_eigenvalue > 0.0 && cert.riccati_residual < -1e-10 * scale &&
        cert.lyapunov_residual < -1e-10 * scale) {
        cert.status = CertifyStatus::Certified;
    } else {
        cert.status = CertifyStatus::InvalidSystem;
        cert.message = "closed-loop certificate verification failed (riccati residual " +
                       std::to_string(cert.riccati_residual) + ")";
    }
    return cert;
}

double local_dissipativity_check(const Subsystem& sub, const Matrix& Y, const Matrix& P) {
    const int p = sub.outputs(), m = sub.inputs(), nx = sub.states();
    if (Y.rows() != p + m || Y.cols() != p + m) {
        throw std::invalid_argument("local_dissipativity_check: Y must be (p+m) x (p+m)");
    }
    if (P.rows() != nx || P.cols() != nx) {
        throw std::invalid_argument("local_dissipativity_check: P must match the state dimension");
    }
    Matrix Y11 = Y.topLeftCorner(p, p);
    Matrix Y12 = Y.topRightCorner(p, m);
    Matrix Y22 = -Y.bottomRightCorner(m, m);

    Matrix lmi(nx + m, nx + m);
    lmi.topLeftCorner(nx, nx) =
        P * sub.A + sub.A.transpose() * P + sub.C.transpose() * Y11 * sub.C;
    lmi.topRightCorner(nx, m) = P * sub.B + sub.C.transpose() * Y12;
    lmi.bottomLeftCorner(m, nx) = lmi.topRightCorner(nx, m).transpose();
    lmi.bottomRightCorner(m, m) = -Y22;
    return lambda_max_sym(lmi);
}

}  // namespace blockcert
