#pragma once

// Shared fixture systems used across the test suites: the {2,3}-partitioned
// five-state benchmark pair, the four 6x6 witness matrices for the
// distributed stability tests, and the five-state flow-bound example.
//
// Note on the benchmark pair: the (3,3) entry of the lower diagonal block is
// taken as -50. The source prints +50, which would make that block
// non-Hurwitz and the comparison construction inapplicable, contradicting the
// stated stability of all four comparison systems.

#include "blockcert/partition.hpp"
#include "blockcert/types.hpp"

namespace blockcert::fixtures {

inline Matrix benchmark_A(bool quarter_first_block) {
    Matrix A11(2, 2);
    A11 << -60, 30, 20, -50;
    if (quarter_first_block) A11 /= 4.0;
    Matrix A12(2, 3);
    A12 << 6, 6, 5, 0, 3, 1;
    Matrix A21(3, 2);
    A21 << 4, 2, 7, -5, -1, 1;
    Matrix A22(3, 3);
    A22 << -90, 20, 20, 0, -10, 5, -1, 1, -50;
    Matrix A(5, 5);
    A << A11, A12, A21, A22;
    return A;
}

inline Matrix benchmark_B() {
    Matrix B(5, 1);
    B << 3, 2, 5, 1, 0;
    return B;
}

inline Matrix benchmark_C(bool flipped_first_entry) {
    Matrix C(1, 5);
    C << (flipped_first_entry ? -2 : 2), 1, 5, 1, 2;
    return C;
}

inline PartitionedSystem benchmark_system(bool quarter_first_block, bool flipped_first_entry) {
    PartitionedSystem sys;
    sys.A = benchmark_A(quarter_first_block);
    sys.B = benchmark_B();
    sys.C = benchmark_C(flipped_first_entry);
    sys.D = Matrix::Zero(1, 1);
    sys.state_partition = Partition({2, 3});
    sys.input_partition = Partition({1});
    sys.output_partition = Partition({1});
    return sys;
}

/// The four 6x6 witness matrices; index 0..3 for Tests I..IV.
inline Matrix witness(int which) {
    Matrix A(6, 6);
    switch (which) {
        case 0:
            A << -2, 6, 6, 2, 0, 2,
                 0, -8, -5, -4, 1, 0,
                 2, -1, -12, -8, 0, 2,
                 1, -1, -5, -6, 1, 1,
                 0, 1, -1, 0, -11, -7,
                 0, 1, 1, -2, -9, -10;
            break;
        case 1:
            A << -4, 2, -1, -1, 0, -1,
                 9, -16, 3, 8, -1, -1,
                 1, -1, -3, -1, 1, -2,
                 -1, 1, 4, -2, -2, 1,
                 -1, 2, 0, 1, -9, 4,
                 -2, 2, -1, 0, -3, -4;
            break;
        case 2:
            A << -5, 3, -1, -1, -1, -1,
                 9, -14, 8, 1, -1, 0,
                 2, -1, -7, -7, 0, 1,
                 1, -1, 4, -9, -1, 2,
                 1, -1, 1, 0, 0, 4,
                 0, -1, -1, 1, -4, -5;
            break;
        case 3:
            A << -9, 7, -3, 3, 1, 2,
                 -6, -4, 2, -3, -1, 0,
                 -1, -1, -2, 5, 1, 0,
                 2, 2, -4, -4, -2, 1,
                 2, -1, 0, 3, -9, -4,
                 0, 2, 0, 0, 2, -7;
            break;
        default:
            throw std::out_of_range("witness: index must be 0..3");
    }
    return A;
}

/// Five-state flow-bound example (trivial partitioning); flip_sign selects
/// the variant with the (5,1) entry negated.
inline PartitionedSystem flow_example(bool flip_sign) {
    PartitionedSystem sys;
    sys.A.resize(5, 5);
    sys.A << -5, -2, -1, 0, 4,
             0, -5, -3, -1, 0,
             0, -2, -9, 0, 0,
             0, 0, -2, -5, 1,
             1, 3, 0, 0, -4;
    if (flip_sign) sys.A(4, 0) = -1.0;
    sys.B.resize(5, 1);
    sys.B << 3, 0, 1, 0, 1;
    sys.C.resize(1, 5);
    sys.C << 1, 2, 0, 0, 8;
    sys.D.resize(1, 1);
    sys.D << 1;
    sys.state_partition = Partition::trivial(5);
    sys.input_partition = Partition({1});
    sys.output_partition = Partition({1});
    return sys;
}

}  // namespace blockcert::fixtures
