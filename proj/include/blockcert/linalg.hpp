#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "blockcert/types.hpp"

namespace blockcert {

// Guard band applied by pipeline code to strict spectral inequalities:
// "Hurwitz" in a precondition means spectral abscissa < -kHurwitzGuard.
inline constexpr double kHurwitzGuard = 1e-10;

struct Spectrum {
    std::vector<std::complex<double>> eigenvalues;  // sorted by (real, imag)
    double spectral_abscissa = 0.0;
};

/// Eigenvalues of a square matrix, deterministically ordered by (real, imag).
Spectrum eigenvalues(const Matrix& A);

double spectral_abscissa(const Matrix& A);

/// True iff spectral_abscissa(A) < -margin.
bool is_hurwitz(const Matrix& A, double margin = 0.0);

/// Largest singular value; 0 for an empty or zero matrix.
double max_singular_value(const Matrix& A);

/// Logarithmic norm mu_2(X) = max eigenvalue of (X + X^T)/2.
double log_norm_mu2(const Matrix& X);

/// sigma_max(-H F^{-1} G + J). Throws if F is singular.
double static_gain(const Matrix& F, const Matrix& G, const Matrix& H, const Matrix& J);

/// Unique symmetric X with A X + X A^T + Q = 0 (Bartels-Stewart on the
/// complex Schur form). Requires A Hurwitz and Q symmetric.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

/// Stabilizing solution P = P^T of  P A + A^T P + Q + P R P = 0  with
/// R, Q >= 0. Invariant-subspace method on the Hamiltonian
/// [[A, R], [-Q, -A^T]] with Newton-Kleinman refinement. Throws
/// "no stabilizing solution" when the Hamiltonian has imaginary-axis
/// eigenvalues.
Matrix solve_riccati(const Matrix& A, const Matrix& R, const Matrix& Q);

/// H-infinity norm of C (sI - A)^{-1} B + D to relative accuracy tol.
/// Bruinsma-Steinbuch iteration on the imaginary-axis eigenvalues of the
/// Hamiltonian pencil, started from sigma_max(D), sigma_max(G(0)) and a
/// coarse frequency grid. Requires A Hurwitz.
double hinf_norm(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D,
                 double tol = 1e-8);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
};

using InputSignal = std::function<Vector(double)>;

/// Time-indexed samples with piecewise-linear interpolation (clamped ends).
struct SampledSignal {
    std::vector<double> times;   // strictly increasing
    std::vector<Vector> values;  // one vector per time
    Vector at(double t) const;
};

/// Classical fixed-step RK4 for xdot = A x + B u(t) on [0, horizon].
/// Pass a null input (or zero-column B) for the autonomous system.
Trajectory simulate_lti(const Matrix& A, const Matrix& B, const Vector& x0,
                        const InputSignal& input, double step, double horizon);

Trajectory simulate_lti(const Matrix& A, const Matrix& B, const Vector& x0,
                        const SampledSignal& input, double step, double horizon);

}  // namespace blockcert
