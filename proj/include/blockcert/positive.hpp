#pragma once

#include <optional>
#include <string>

#include "blockcert/types.hpp"

namespace blockcert {

/// Internally positive system: F Metzler, G/H/J entrywise nonnegative.
struct PositiveSystem {
    Matrix F;  // n x n, Metzler
    Matrix G;  // n x n_i, >= 0
    Matrix H;  // n_o x n, >= 0
    Matrix J;  // n_o x n_i, >= 0

    int n() const { return static_cast<int>(F.rows()); }
    int inputs() const { return static_cast<int>(G.cols()); }
    int outputs() const { return static_cast<int>(H.rows()); }

    /// Throws unless the sign structure and dimensions are valid.
    void check() const;
};

bool is_metzler(const Matrix& F);

struct MetzlerCertificate {
    bool hurwitz = false;
    Vector d;  // -F^{-1} 1, entrywise > 0 when hurwitz
    Vector e;  // -F^{-T} 1
    double spectral_abscissa = 0.0;
};

/// Prop.-style stability certificate for a Metzler matrix: positive d, e with
/// -F d > 0 and -F^T e > 0, or the (nonnegative) abscissa when not Hurwitz.
MetzlerCertificate metzler_stability_certificate(const Matrix& F);

/// sigma_max(-H F^{-1} G + J); equals the H-infinity norm for positive
/// systems. Requires F Hurwitz.
double positive_hinf_norm(const PositiveSystem& ps);

/// LP certificate of level delta:
///   F d + G f < 0,        H d + J f <= g,
///   F^T e + H^T g < 0,    G^T e + J^T g < delta^2 f,
/// with d, e, f > 0 and g >= 0.
struct ScalingVectors {
    Vector d, e, g, f;
    double delta = 0.0;
    double slack = 0.0;  // optimal LP slack; feasibility margin of the strict rows
};

/// Maximizes the common slack t of the strict inequalities under the
/// normalization sum(d) + sum(e) + sum(f) <= 1; g is recovered as H d + J f.
/// Returns nullopt when the optimum slack is below 1e-9 (infeasible level,
/// i.e. delta <= positive_hinf_norm up to tolerance).
std::optional<ScalingVectors> solve_scaling_lp(const PositiveSystem& ps, double delta);

/// P = diag(e_i/d_i), verified against the positive-system Riccati LMI at
/// level sv.delta. Throws on verification failure.
Matrix diagonal_riccati_certificate(const PositiveSystem& ps, const ScalingVectors& sv);

enum class GramianSide {
    Observability,    // F d < 0, e > -F^{-T} H^T H d:  F^T Q + Q F + H^T H < 0
    Controllability,  // F^T d < 0, e > -F^{-1} G G^T d:  F P + P F^T + G G^T < 0
};

/// Diagonal Lyapunov-inequality solution diag(e_i/d_i) from scaling vectors.
/// HG is H for Observability mode and G for Controllability mode.
Matrix lyapunov_diag_from_vectors(const Matrix& F, const Matrix& HG, const Vector& d,
                                  const Vector& e, GramianSide mode);

}  // namespace blockcert
