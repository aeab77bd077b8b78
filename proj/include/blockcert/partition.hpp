#pragma once

#include <string>
#include <vector>

#include "blockcert/types.hpp"

namespace blockcert {

/// An alpha = {k_1, ..., k_n} partitioning of a dimension N = sum k_i.
struct Partition {
    std::vector<int> sizes;

    Partition() = default;
    explicit Partition(std::vector<int> block_sizes);

    int count() const { return static_cast<int>(sizes.size()); }
    int total() const;
    int offset(int i) const;  // start index of block i
    int size(int i) const { return sizes.at(static_cast<size_t>(i)); }

    /// The trivial partitioning (all blocks of size 1).
    static Partition trivial(int n);
};

/// State-space system with state/input/output partitionings.
struct PartitionedSystem {
    Matrix A, B, C, D;
    Partition state_partition;
    Partition input_partition;
    Partition output_partition;
};

struct ValidationReport {
    bool dimensions_ok = false;
    bool all_diagonal_blocks_hurwitz = false;
    std::vector<double> block_abscissas;     // spectral abscissa of each A_ii
    std::vector<int> non_hurwitz_blocks;     // indices with abscissa >= -guard
    std::string message;

    bool ok() const { return dimensions_ok; }
};

/// Dimension consistency plus per-block Hurwitz report. Non-Hurwitz diagonal
/// blocks are a warning here (only comparison construction requires them).
ValidationReport validate(const PartitionedSystem& sys);

/// The (i, j) block of M under the given row/column partitionings.
Matrix extract_block(const Matrix& M, const Partition& row_partition,
                     const Partition& col_partition, int i, int j);

/// [M_{i,1} ... M_{i,i-1} M_{i,i+1} ... M_{i,n}]; empty (k_i x 0) when n = 1.
Matrix block_row_without_diagonal(const Matrix& M, const Partition& partition, int i);

}  // namespace blockcert
