#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blockcert/partition.hpp"
#include "blockcert/positive.hpp"
#include "blockcert/types.hpp"

namespace blockcert {

/// Scalar multiplier families recovered from a scaling certificate:
///   phi_ij = |F_ij| e_i / d_j   (so phi_ii = e_i / d_i),
///   gamma_il = G_il e_i / f_l,  eta_kj = H_kj d_j / g_k,
///   lambda_kl = J_kl f_l / g_k, mu_kl = J_kl g_k / f_l.
/// Entries of zero comparison blocks are exactly zero.
struct MultiplierScalars {
    Matrix phi;     // n x n
    Matrix gamma;   // n x n_i
    Matrix eta;     // n_o x n
    Matrix lambda;  // n_o x n_i
    Matrix mu;      // n_o x n_i
};

MultiplierScalars multipliers_from_scalings(const PositiveSystem& ps, const ScalingVectors& sv);

/// Per-block stabilizing solutions of
///   P_i A_ii + A_ii^T P_i + phi_ii I
///     + P_i (sum_j A_ij A_ij^T / phi_ij + sum_l B_il B_il^T / gamma_il) P_i = 0,
/// sums over the nonzero blocks. Degenerates to a Lyapunov solve when the
/// quadratic term vanishes. Blocks are solved in parallel (max_threads = 0
/// picks hardware concurrency; the BLOCKCERT_THREADS env var caps it).
std::vector<Matrix> block_riccati_solutions(const PartitionedSystem& sys,
                                            const MultiplierScalars& ms, int max_threads = 0);

Matrix assemble_blockdiag(const std::vector<Matrix>& blocks);

/// max eigenvalue of P A + A^T P (negative for a valid certificate).
double verify_lyapunov_lmi(const Matrix& A, const Matrix& P);

/// max eigenvalue of the bounded-real Riccati LMI
///   P A + A^T P + C^T C - (P B + C^T D)(D^T D - delta^2 I)^{-1}(D^T C + B^T P).
/// Requires sigma_max(D) < delta.
double verify_riccati_lmi(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D,
                          const Matrix& P, double delta);
double verify_riccati_lmi(const PartitionedSystem& sys, const Matrix& P, double delta);

/// Matrix-valued multipliers, indexed by block pair. Entry (i, j) of phi is
/// k_j x k_j, (k, i) of xi is m_k x m_k, (i, l) of gamma is q_l x q_l,
/// (k, l) of upsilon is q_l x q_l and of lambda is m_k x m_k. Zero-size
/// matrices mark absent (zero) blocks.
struct MultiplierMatrices {
    std::vector<std::vector<Matrix>> phi;      // n x n
    std::vector<std::vector<Matrix>> xi;       // n_o x n
    std::vector<std::vector<Matrix>> gamma;    // n x n_i
    std::vector<std::vector<Matrix>> upsilon;  // n_o x n_i
    std::vector<std::vector<Matrix>> lambda;   // n_o x n_i
};

/// Lift scalar multipliers to phi_ij I etc. with the partition's block sizes.
MultiplierMatrices lift_multipliers(const MultiplierScalars& ms, const PartitionedSystem& sys);

/// Residuals of the per-block feasibility conditions:
///   (a) per i:   block Riccati LMI with multiplier sums        (< 0)
///   (b) per k,l: [[Upsilon_kl, -D_kl^T], [-D_kl, Lambda_kl]]   (>= 0, residual = -min eig)
///   (c) per k:   sum_i Xi_ki + sum_l Lambda_kl - I             (<= 0)
///   (d) per l:   sum_i Gamma_il + sum_k Upsilon_kl - delta^2 I (< 0)
struct MultiplierLmiResiduals {
    std::vector<double> block_riccati;  // (a), per state block
    Matrix feedthrough;                 // (b), n_o x n_i
    std::vector<double> output_budget;  // (c), per output block
    std::vector<double> input_budget;   // (d), per input block
    bool pass(double tol = 1e-9) const;
};

MultiplierLmiResiduals verify_multiplier_lmis(const PartitionedSystem& sys,
                                              const std::vector<Matrix>& blocks,
                                              const MultiplierMatrices& mm, double delta);

enum class CertifyStatus {
    Certified,
    ComparisonUnstable,       // comparison F not Hurwitz: inconclusive, not instability
    DeltaBelowComparisonNorm, // requested delta <= comparison-system norm
    InvalidSystem,
};

struct StageTimings {
    double comparison_s = 0.0;
    double lp_s = 0.0;
    double riccati_s = 0.0;
    double verify_s = 0.0;
    double total_s = 0.0;
};

struct BlockDiagonalCertificate {
    CertifyStatus status = CertifyStatus::InvalidSystem;
    std::vector<Matrix> blocks;      // P_1 ... P_n
    double delta = 0.0;              // certified H-infinity level
    double comparison_norm = 0.0;
    double lyapunov_residual = 0.0;  // max eig of P A + A^T P
    double riccati_residual = 0.0;   // max eig of the bounded-real LMI
    double min_block_eigenvalue = 0.0;
    ScalingVectors scalings;
    MultiplierScalars multipliers;
    StageTimings timings;
    std::string message;

    bool certified() const { return status == CertifyStatus::Certified; }
};

struct CertifyOptions {
    double hinf_tol = 1e-8;
    int max_threads = 0;  // 0 = hardware concurrency, capped by BLOCKCERT_THREADS
};

/// Step 1: comparison system + its norm. Step 2: scaling LP at delta
/// (default 1.001 x comparison norm). Step 3: per-block Riccati equations.
/// Both final LMIs are verified on the assembled block-diagonal P.
BlockDiagonalCertificate certify_hinf(const PartitionedSystem& sys,
                                      std::optional<double> delta = std::nullopt,
                                      const CertifyOptions& opts = {});

/// B = C = D = 0 specialization: block-diagonal Lyapunov certificate from
/// stability of M^a(A).
BlockDiagonalCertificate certify_lyapunov(const Matrix& A, const Partition& partition,
                                          const CertifyOptions& opts = {});

}  // namespace blockcert
