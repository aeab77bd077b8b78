#pragma once

#include "blockcert/linalg.hpp"
#include "blockcert/partition.hpp"
#include "blockcert/types.hpp"

namespace blockcert {

/// Sampled domination record of the original flow by the N^a comparison flow.
struct BoundedTrajectoryReport {
    std::vector<double> times;
    Matrix state_block_norms;   // samples x n,   ||x_i(t)||_2
    Matrix comparison_states;   // samples x n,   xi_i(t)
    Matrix output_norms;        // samples x n_o, ||y_k(t)||_2
    Matrix comparison_outputs;  // samples x n_o, nu_k(t)
    double max_violation = 0.0;  // max over samples of ||.|| - bound; <= 0 when dominated
};

/// Integrates xdot = A x + B u and the comparison system of
/// comparison_system_simple on the same RK4 grid, with xi_i(0) = ||x_i(0)||
/// and upsilon_l(t) = ||u_l(t)||. Theorem-2 domination is reported sample
/// by sample. Pass a null input for u = 0.
BoundedTrajectoryReport comparison_trajectory_bound(const PartitionedSystem& sys, const Vector& x0,
                                                    const InputSignal& input, double horizon,
                                                    double step);

struct SeparableLyapunovValues {
    double V_max = 0.0;   // max_i ||x_i|| / d_i
    double V_sum = 0.0;   // sum_i e_i ||x_i||
    double V_diag = 0.0;  // sum_i (e_i/d_i) ||x_i||^2
};

/// The three separable Lyapunov functions induced by a Hurwitz N^a(A) and
/// positive vectors d, e with -F d > 0 and -F^T e > 0 (checked).
SeparableLyapunovValues separable_lyapunov_values(const Matrix& A, const Partition& partition,
                                                  const Vector& d, const Vector& e,
                                                  const Vector& x);

}  // namespace blockcert
