#pragma once

#include "blockcert/partition.hpp"
#include "blockcert/positive.hpp"
#include "blockcert/types.hpp"

namespace blockcert {

enum class ComparisonVariant {
    M_ALPHA,       // diag -1, offdiag ||(sI - A_ii)^{-1} A_ij||_Hinf
    MTILDE_ALPHA,  // diag -||(sI - A_ii)^{-1}||_Hinf^{-1}, offdiag ||A_ij||_2
    N_ALPHA,       // diag min{mu_2(A_ii), 0}, offdiag ||A_ij||_2
};

/// The n x n comparison matrix of a partitioned A. M_ALPHA and MTILDE_ALPHA
/// require every A_ii Hurwitz; N_ALPHA is defined for any A.
Matrix comparison_matrix(const Matrix& A, const Partition& partition, ComparisonVariant variant,
                         double tol = 1e-8);

/// Comparison system built on M_ALPHA:
///   F = M^a(A), G_il = ||(sI - A_ii)^{-1} B_il||_Hinf,
///   H_kj = ||C_kj||_2, J_kl = ||D_kl||_2.
PositiveSystem comparison_system_hard(const PartitionedSystem& sys, double tol = 1e-8);

/// Comparison system built on N_ALPHA: F = N^a(A), G_il = ||B_il||_2,
/// H and J as above. Defined for any A.
PositiveSystem comparison_system_simple(const PartitionedSystem& sys);

}  // namespace blockcert
