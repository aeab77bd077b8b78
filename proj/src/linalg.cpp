#include "blockcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace blockcert {

namespace {

void require_square(const Matrix& A, const char* who) {
    if (A.rows() != A.cols()) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                    std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
    }
}

void require_finite(const Matrix& A, const char* who) {
    if (!A.allFinite()) {
        throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
    }
}

}  // namespace

Spectrum eigenvalues(const Matrix& A) {
    require_square(A, "eigenvalues");
    require_finite(A, "eigenvalues");
    Spectrum s;
    if (A.rows() == 0) return s;
    Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalues: QR iteration failed to converge");
    }
    s.eigenvalues.resize(static_cast<size_t>(A.rows()));
    for (int i = 0; i < A.rows(); ++i) s.eigenvalues[static_cast<size_t>(i)] = es.eigenvalues()(i);
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end(),
              [](const std::complex<double>& a, const std::complex<double>& b) {
                  if (a.real() != b.real()) return a.real() < b.real();
                  return a.imag() < b.imag();
              });
    s.spectral_abscissa = s.eigenvalues.back().real();
    return s;
}

double spectral_abscissa(const Matrix& A) { return eigenvalues(A).spectral_abscissa; }

bool is_hurwitz(const Matrix& A, double margin) {
    return spectral_abscissa(A) < -margin;
}

double max_singular_value(const Matrix& A) {
    if (A.rows() == 0 || A.cols() == 0) return 0.0;
    require_finite(A, "max_singular_value");
    if (A.isZero(0.0)) return 0.0;
    return A.jacobiSvd().singularValues()(0);
}

double log_norm_mu2(const Matrix& X) {
    require_square(X, "log_norm_mu2");
    if (X.rows() == 0) return 0.0;
    Matrix S = 0.5 * (X + X.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double static_gain(const Matrix& F, const Matrix& G, const Matrix& H, const Matrix& J) {
    require_square(F, "static_gain");
    if (H.rows() == 0 || G.cols() == 0) return max_singular_value(J);
    Eigen::FullPivLU<Matrix> lu(F);
    if (!lu.isInvertible()) {
        throw std::invalid_argument("static_gain: F is singular");
    }
    Matrix gain = -H * lu.solve(G);
    if (J.size() > 0) gain += J;
    return max_singular_value(gain);
}

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
    require_square(A, "solve_lyapunov");
    if (Q.rows() != A.rows() || Q.cols() != A.cols()) {
        throw std::invalid_argument("solve_lyapunov: Q must match A");
    }
    if (!is_hurwitz(A, kHurwitzGuard)) {
        throw std::invalid_argument("solve_lyapunov: A is not Hurwitz");
    }
    const int n = static_cast<int>(A.rows());

    Eigen::ComplexSchur<Matrix> schur(A);
    if (schur.info() != Eigen::Success) {
        throw std::runtime_error("solve_lyapunov: Schur decomposition failed");
    }
    const ComplexMatrix& U = schur.matrixU();
    ComplexMatrix T = schur.matrixT();

    // A = U T U^*; with X = U Y U^* the equation becomes T Y + Y T^* + F = 0.
    ComplexMatrix F = U.adjoint() * Q * U;
    ComplexMatrix Y = ComplexMatrix::Zero(n, n);
    for (int k = n - 1; k >= 0; --k) {
        ComplexVector rhs = F.col(k);
        for (int i = k + 1; i < n; ++i) rhs += Y.col(i) * std::conj(T(k, i));
        // (T + conj(T_kk) I) y_k = -rhs; diagonal entries are lambda_i + conj(lambda_k) != 0.
        ComplexMatrix Tk = T;
        Tk.diagonal().array() += std::conj(T(k, k));
        Y.col(k) = Tk.triangularView<Eigen::Upper>().solve(-rhs);
    }
    Matrix X = (U * Y * U.adjoint()).real();
    X = 0.5 * (X + X.transpose()).eval();

    double scale = 1.0 + Q.cwiseAbs().maxCoeff();
    double residual = (A * X + X * A.transpose() + Q).cwiseAbs().maxCoeff();
    if (residual > 1e-9 * scale) {
        throw std::runtime_error("solve_lyapunov: residual " + std::to_string(residual) +
                                 " exceeds tolerance");
    }
    return X;
}

namespace {

// One Newton-Kleinman step: P+ solves P+(A + R P) + (A + R P)^T P+ + Q - P R P = 0.
Matrix newton_kleinman(const Matrix& A, const Matrix& R, const Matrix& Q, Matrix P,
                       double* residual_out) {
    double best = std::numeric_limits<double>::infinity();
    Matrix bestP = P;
    // Linear (not quadratic) convergence at boundary double roots needs the
    // longer leash.
    for (int it = 0; it < 60; ++it) {
        Matrix res = P * A + A.transpose() * P + Q + P * R * P;
        double rnorm = res.cwiseAbs().maxCoeff();
        if (rnorm < best) {
            best = rnorm;
            bestP = P;
        } else {
            break;
        }
        if (rnorm == 0.0) break;
        Matrix Ak = A + R * P;
        if (!is_hurwitz(Ak, 0.0)) break;
        // Newton step: P+ solves Ak^T P+ + P+ Ak + Q - P R P = 0.
        P = solve_lyapunov(Ak.transpose(), Q - P * R * P);
        P = 0.5 * (P + P.transpose()).eval();
    }
    if (residual_out) *residual_out = best;
    return bestP;
}

}  // namespace

Matrix solve_riccati(const Matrix& A, const Matrix& R, const Matrix& Q) {
    require_square(A, "solve_riccati");
    const int n = static_cast<int>(A.rows());
    if (R.rows() != n || R.cols() != n || Q.rows() != n || Q.cols() != n) {
        throw std::invalid_argument("solve_riccati: R and Q must match A");
    }
    Matrix Rs = 0.5 * (R + R.transpose());
    Matrix Qs = 0.5 * (Q + Q.transpose());

    Matrix H(2 * n, 2 * n);
    H << A, Rs, -Qs, -A.transpose();

    Eigen::EigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("solve_riccati: Hamiltonian eigensolve failed");
    }
    double hscale = std::max(1.0, H.cwiseAbs().maxCoeff());
    bool subspace_ok = true;
    std::vector<int> stable;
    for (int i = 0; i < 2 * n; ++i) {
        const auto ev = es.eigenvalues()(i);
        if (std::abs(ev.real()) < 1e-11 * hscale) subspace_ok = false;
        if (ev.real() < 0.0) stable.push_back(i);
    }
    if (static_cast<int>(stable.size()) != n) subspace_ok = false;

    Matrix P;
    if (subspace_ok) {
        ComplexMatrix V1(n, n), V2(n, n);
        for (int j = 0; j < n; ++j) {
            V1.col(j) = es.eigenvectors().col(stable[static_cast<size_t>(j)]).head(n);
            V2.col(j) = es.eigenvectors().col(stable[static_cast<size_t>(j)]).tail(n);
        }
        Eigen::FullPivLU<ComplexMatrix> lu(V1);
        if (lu.isInvertible()) {
            P = (V2 * lu.inverse()).real();
            P = 0.5 * (P + P.transpose()).eval();
        } else {
            subspace_ok = false;
        }
    }
    if (!subspace_ok) {
        // Imaginary-axis or defective Hamiltonian (boundary cases such as a
        // double root). For Hurwitz A, Newton-Kleinman from the Lyapunov
        // solution still reaches the maximal solution.
        if (!is_hurwitz(A, 0.0)) {
            throw std::runtime_error("solve_riccati: no stabilizing solution "
                                     "(Hamiltonian eigenvalue on the imaginary axis)");
        }
        P = solve_lyapunov(A.transpose(), Qs);
    }

    double residual = 0.0;
    P = newton_kleinman(A, Rs, Qs, P, &residual);

    double scale = 1.0 + Qs.cwiseAbs().maxCoeff() +
                   P.cwiseAbs().maxCoeff() * P.cwiseAbs().maxCoeff() * Rs.cwiseAbs().maxCoeff();
    if (!(residual <= 1e-8 * scale)) {
        throw std::runtime_error(subspace_ok
                                     ? "solve_riccati: Newton refinement stalled at residual " +
                                           std::to_string(residual)
                                     : "solve_riccati: no stabilizing solution "
                                       "(Hamiltonian eigenvalue on the imaginary axis)");
    }
    return P;
}

namespace {

// sigma_max of G(i w) = C (iwI - A)^{-1} B + D.
double gain_at(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D, double w) {
    const int n = static_cast<int>(A.rows());
    ComplexMatrix M = ComplexMatrix::Identity(n, n) * std::complex<double>(0.0, w) - A;
    ComplexMatrix X = M.partialPivLu().solve(B.cast<std::complex<double>>());
    ComplexMatrix G = C.cast<std::complex<double>>() * X + D.cast<std::complex<double>>();
    if (G.rows() == 0 || G.cols() == 0) return 0.0;
    return G.jacobiSvd().singularValues()(0);
}

// Positive frequencies w where gamma is a singular value of G(i w), read off
// the imaginary-axis eigenvalues of the Hamiltonian.
std::vector<double> crossing_frequencies(const Matrix& A, const Matrix& B, const Matrix& C,
                                         const Matrix& D, double gamma) {
    const int n = static_cast<int>(A.rows());
    const int ni = static_cast<int>(B.cols());
    Matrix Rg = gamma * gamma * Matrix::Identity(ni, ni) - D.transpose() * D;
    Eigen::LLT<Matrix> llt(Rg);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("hinf_norm: gamma below sigma_max(D)");
    }
    Matrix RinvBt = llt.solve(B.transpose());
    Matrix RinvDtC = llt.solve(D.transpose() * C);
    Matrix Acl = A + B * RinvDtC;
    Matrix H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = Acl;
    H.topRightCorner(n, n) = B * RinvBt;
    H.bottomLeftCorner(n, n) = -C.transpose() * (C + D * RinvDtC);
    H.bottomRightCorner(n, n) = -Acl.transpose();

    Eigen::EigenSolver<Matrix> es(H, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("hinf_norm: Hamiltonian eigensolve failed");
    }
    std::vector<double> ws;
    double hscale = std::max(1.0, H.cwiseAbs().maxCoeff());
    for (int i = 0; i < 2 * n; ++i) {
        const auto ev = es.eigenvalues()(i);
        if (std::abs(ev.real()) <= 1e-9 * hscale + 1e-7 * std::abs(ev.imag()) && ev.imag() >= 0.0) {
            ws.push_back(ev.imag());
        }
    }
    std::sort(ws.begin(), ws.end());
    return ws;
}

}  // namespace

double hinf_norm(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D, double tol) {
    require_square(A, "hinf_norm");
    const int n = static_cast<int>(A.rows());
    if (B.rows() != n || C.cols() != n || D.rows() != C.rows() || D.cols() != B.cols()) {
        throw std::invalid_argument("hinf_norm: inconsistent dimensions");
    }
    if (tol <= 0.0) throw std::invalid_argument("hinf_norm: tol must be positive");
    if (B.cols() == 0 || C.rows() == 0) return 0.0;
    if (n == 0) return max_singular_value(D);
    Spectrum spec = eigenvalues(A);
    if (!(spec.spectral_abscissa < -kHurwitzGuard)) {
        throw std::invalid_argument("hinf_norm: A is not Hurwitz");
    }
    if (B.isZero(0.0) || C.isZero(0.0)) return max_singular_value(D);

    // Lower bound: sigma_max(D), DC gain, and a coarse log-spaced grid around
    // the eigenvalue magnitudes.
    double lb = max_singular_value(D);
    lb = std::max(lb, gain_at(A, B, C, D, 0.0));
    double wmax = 1.0;
    for (const auto& ev : spec.eigenvalues) wmax = std::max(wmax, std::abs(ev));
    wmax *= 10.0;
    const int grid = 128;
    for (int k = 0; k <= grid; ++k) {
        double w = std::pow(10.0, std::log10(wmax * 1e-5) +
                                      (std::log10(wmax) - std::log10(wmax * 1e-5)) * k / grid);
        lb = std::max(lb, gain_at(A, B, C, D, w));
    }
    // Peaks near lightly damped poles.
    for (const auto& ev : spec.eigenvalues) {
        if (ev.imag() > 0.0) lb = std::max(lb, gain_at(A, B, C, D, ev.imag()));
    }
    if (lb == 0.0) return 0.0;

    const double step = tol / 2.0;
    for (int it = 0; it < 200; ++it) {
        double gamma = lb * (1.0 + 2.0 * step);
        std::vector<double> ws = crossing_frequencies(A, B, C, D, gamma);
        double improved = lb;
        if (!ws.empty()) {
            std::vector<double> cands;
            for (size_t i = 0; i + 1 < ws.size(); ++i) cands.push_back(0.5 * (ws[i] + ws[i + 1]));
            for (double w : ws) cands.push_back(w);
            for (double w : cands) improved = std::max(improved, gain_at(A, B, C, D, w));
        }
        if (improved <= lb * (1.0 + step / 4.0)) {
            // No crossing above the bracket: norm lies in [lb, lb(1+2*step)].
            return lb * (1.0 + step);
        }
        lb = improved;
    }
    throw std::runtime_error("hinf_norm: iteration failed to converge");
}

Vector SampledSignal::at(double t) const {
    if (times.empty()) throw std::invalid_argument("SampledSignal: empty signal");
    if (times.size() != values.size()) {
        throw std::invalid_argument("SampledSignal: times/values size mismatch");
    }
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    size_t hi = static_cast<size_t>(it - times.begin());
    size_t lo = hi - 1;
    double span = times[hi] - times[lo];
    double a = span > 0.0 ? (t - times[lo]) / span : 0.0;
    return (1.0 - a) * values[lo] + a * values[hi];
}

Trajectory simulate_lti(const Matrix& A, const Matrix& B, const Vector& x0,
                        const InputSignal& input, double step, double horizon) {
    require_square(A, "simulate_lti");
    if (x0.size() != A.rows()) throw std::invalid_argument("simulate_lti: x0 dimension mismatch");
    if (B.size() > 0 && B.rows() != A.rows()) {
        throw std::invalid_argument("simulate_lti: B row dimension mismatch");
    }
    if (step <= 0.0 || horizon <= 0.0) {
        throw std::invalid_argument("simulate_lti: step and horizon must be positive");
    }
    const auto nsteps = static_cast<long>(std::llround(horizon / step));
    if (nsteps < 1 || std::abs(nsteps * step - horizon) > 1e-9 * horizon) {
        throw std::invalid_argument("simulate_lti: step must divide horizon");
    }

    const bool driven = input && B.cols() > 0;
    auto deriv = [&](const Vector& x, double t) -> Vector {
        Vector dx = A * x;
        if (driven) dx += B * input(t);
        return dx;
    };

    Trajectory traj;
    traj.times.reserve(static_cast<size_t>(nsteps) + 1);
    traj.states.reserve(static_cast<size_t>(nsteps) + 1);
    Vector x = x0;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    for (long k = 0; k < nsteps; ++k) {
        double t = static_cast<double>(k) * step;
        Vector k1 = deriv(x, t);
        Vector k2 = deriv(x + 0.5 * step * k1, t + 0.5 * step);
        Vector k3 = deriv(x + 0.5 * step * k2, t + 0.5 * step);
        Vector k4 = deriv(x + step * k3, t + step);
        x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.times.push_back(static_cast<double>(k + 1) * step);
        traj.states.push_back(x);
    }
    return traj;
}

Trajectory simulate_lti(const Matrix& A, const Matrix& B, const Vector& x0,
                        const SampledSignal& input, double step, double horizon) {
    return simulate_lti(A, B, x0, [&input](double t) { return input.at(t); }, step, horizon);
}

}  // namespace blockcert
