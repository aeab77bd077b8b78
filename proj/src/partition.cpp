#include "blockcert/partition.hpp"

#include <numeric>
#include <stdexcept>

#include "blockcert/linalg.hpp"

namespace blockcert {

Partition::Partition(std::vector<int> block_sizes) : sizes(std::move(block_sizes)) {
    for (int k : sizes) {
        if (k < 1) throw std::invalid_argument("Partition: block sizes must be >= 1");
    }
}

int Partition::total() const { return std::accumulate(sizes.begin(), sizes.end(), 0); }

int Partition::offset(int i) const {
    if (i < 0 || i >= count()) throw std::out_of_range("Partition::offset: bad block index");
    return std::accumulate(sizes.begin(), sizes.begin() + i, 0);
}

Partition Partition::trivial(int n) {
    if (n < 0) throw std::invalid_argument("Partition::trivial: negative dimension");
    return Partition(std::vector<int>(static_cast<size_t>(n), 1));
}

ValidationReport validate(const PartitionedSystem& sys) {
    ValidationReport rep;
    const int N = sys.state_partition.total();
    const int Ni = sys.input_partition.total();
    const int No = sys.output_partition.total();

    auto fail = [&rep](const std::string& msg) {
        rep.dimensions_ok = false;
        rep.message = msg;
        return rep;
    };

    if (sys.A.rows() != N || sys.A.cols() != N) {
        return fail("state partition totals " + std::to_string(N) + " but A is " +
                    std::to_string(sys.A.rows()) + "x" + std::to_string(sys.A.cols()));
    }
    if (sys.B.rows() != N || sys.B.cols() != Ni) {
        return fail("B must be " + std::to_string(N) + "x" + std::to_string(Ni) + ", got " +
                    std::to_string(sys.B.rows()) + "x" + std::to_string(sys.B.cols()));
    }
    if (sys.C.rows() != No || sys.C.cols() != N) {
        return fail("C must be " + std::to_string(No) + "x" + std::to_string(N) + ", got " +
                    std::to_string(sys.C.rows()) + "x" + std::to_string(sys.C.cols()));
    }
    if (sys.D.rows() != No || sys.D.cols() != Ni) {
        return fail("D must be " + std::to_string(No) + "x" + std::to_string(Ni) + ", got " +
                    std::to_string(sys.D.rows()) + "x" + std::to_string(sys.D.cols()));
    }
    if (!sys.A.allFinite() || !sys.B.allFinite() || !sys.C.allFinite() || !sys.D.allFinite()) {
        return fail("system matrices must have finite entries");
    }
    rep.dimensions_ok = true;

    rep.all_diagonal_blocks_hurwitz = true;
    for (int i = 0; i < sys.state_partition.count(); ++i) {
        Matrix Aii = extract_block(sys.A, sys.state_partition, sys.state_partition, i, i);
        double abscissa = spectral_abscissa(Aii);
        rep.block_abscissas.push_back(abscissa);
        if (!(abscissa < -kHurwitzGuard)) {
            rep.all_diagonal_blocks_hurwitz = false;
            rep.non_hurwitz_blocks.push_back(i);
            rep.message += (rep.message.empty() ? "" : "; ") + std::string("block ") +
                           std::to_string(i + 1) + " not Hurwitz (abscissa " +
                           std::to_string(abscissa) + ")";
        }
    }
    return rep;
}

Matrix extract_block(const Matrix& M, const Partition& row_partition,
                     const Partition& col_partition, int i, int j) {
    if (M.rows() != row_partition.total() || M.cols() != col_partition.total()) {
        throw std::invalid_argument("extract_block: partition totals do not match matrix");
    }
    if (i < 0 || i >= row_partition.count() || j < 0 || j >= col_partition.count()) {
        throw std::out_of_range("extract_block: block index out of range");
    }
    return M.block(row_partition.offset(i), col_partition.offset(j), row_partition.size(i),
                   col_partition.size(j));
}

Matrix block_row_without_diagonal(const Matrix& M, const Partition& partition, int i) {
    if (M.rows() != partition.total() || M.cols() != partition.total()) {
        throw std::invalid_argument("block_row_without_diagonal: partition does not match matrix");
    }
    if (i < 0 || i >= partition.count()) {
        throw std::out_of_range("block_row_without_diagonal: bad block index");
    }
    const int ki = partition.size(i);
    Matrix out(ki, partition.total() - ki);
    int col = 0;
    for (int j = 0; j < partition.count(); ++j) {
        if (j == i) continue;
        out.middleCols(col, partition.size(j)) =
            M.block(partition.offset(i), partition.offset(j), ki, partition.size(j));
        col += partition.size(j);
    }
    return out;
}

}  // namespace blockcert
