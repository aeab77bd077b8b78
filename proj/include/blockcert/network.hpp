#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockcert/certify.hpp"
#include "blockcert/partition.hpp"
#include "blockcert/positive.hpp"
#include "blockcert/types.hpp"

namespace blockcert {

/// One node G_i = C_i (sI - A_i)^{-1} B_i of a feedback interconnection.
struct Subsystem {
    Matrix A, B, C;
    int states() const { return static_cast<int>(A.rows()); }
    int inputs() const { return static_cast<int>(B.cols()); }
    int outputs() const { return static_cast<int>(C.rows()); }
};

/// Feedback network: w_i = sum_j M_ij y_j + sum_l K_il u_l, y = N (y_1...y_n),
/// with M_ii = 0 (no direct self-loops) and no feedthrough anywhere.
struct NetworkModel {
    std::vector<Subsystem> subsystems;
    Matrix M;  // (sum inputs) x (sum outputs), zero diagonal blocks
    Matrix K;  // (sum inputs) x N_i
    Matrix N;  // N_o x (sum outputs)
    Partition external_input_partition;   // columns of K
    Partition external_output_partition;  // rows of N

    Partition internal_input_partition() const;   // rows of M / K
    Partition internal_output_partition() const;  // cols of M / N

    /// Throws unless dimensions are consistent, M_ii = 0, every A_i Hurwitz.
    void check() const;
};

/// Comparison system with subsystem-aware couplings:
///   F_ii = -1, F_ij = ||G_i(s) M_ij||_Hinf, G_il = ||G_i(s) K_il||_Hinf,
///   H_kj = sigma_max(N_kj), J = 0.
PositiveSystem network_comparison_system(const NetworkModel& net, double tol = 1e-8);

/// Decoupled variant: F_ii = -||G_i||_Hinf^{-1}, F_ij = ||M_ij||_2,
///   G_il = sigma_max(K_il), H_kj = sigma_max(N_kj), J = 0. More conservative.
PositiveSystem network_comparison_decoupled(const NetworkModel& net, double tol = 1e-8);

/// Closed-loop realization: A_ii = A_i, A_ij = B_i M_ij C_j, B_il = B_i K_il,
/// C_kj = N_kj C_j, D = 0, partitioned by subsystem states.
PartitionedSystem assemble_closed_loop(const NetworkModel& net);

struct NetworkCertificate {
    CertifyStatus status = CertifyStatus::InvalidSystem;
    std::vector<Matrix> blocks;  // P_i per subsystem
    double delta = 0.0;
    double comparison_norm = 0.0;
    double riccati_residual = 0.0;   // closed-loop bounded-real LMI
    double lyapunov_residual = 0.0;
    double min_block_eigenvalue = 0.0;
    ScalingVectors scalings;
    std::vector<Matrix> supply_Y22;  // Y_22^i of the constructed supply rates
    Vector supply_Y11;               // phi_ii, so Y_11^i = phi_ii I
    std::string message;
    bool certified() const { return status == CertifyStatus::Certified; }
};

/// Certifies ||C (sI - A)^{-1} B||_Hinf < delta for the closed loop via the
/// network comparison system, per-subsystem Riccati solutions
///   P_i A_i + A_i^T P_i + phi_ii C_i^T C_i + eps_i I + P_i B_i Z_i B_i^T P_i = 0,
///   Z_i = sum_j M_ij M_ij^T / phi_ij + sum_l K_il K_il^T / gamma_il,
/// and direct verification of the closed-loop LMI. Default delta is
/// 1.001 x comparison norm.
NetworkCertificate network_hinf_certificate(const NetworkModel& net,
                                            std::optional<double> delta = std::nullopt,
                                            double tol = 1e-8);

/// max eigenvalue of the local dissipativity LMI
///   [[P A + A^T P + C^T Y11 C, P B + C^T Y12], [*, -Y22]]
/// where Y = [[Y11, Y12], [Y12^T, -Y22]] is the supply-rate matrix
/// partitioned by (outputs, inputs) of the subsystem.
double local_dissipativity_check(const Subsystem& sub, const Matrix& Y, const Matrix& P);

}  // namespace blockcert
