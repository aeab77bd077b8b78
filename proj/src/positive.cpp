#include "blockcert/positive.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "blockcert/linalg.hpp"
#include "blockcert/simplex.hpp"

namespace blockcert {

namespace {

constexpr double kLpFeasibilitySlack = 1e-9;

void require_metzler(const Matrix& F, const char* who) {
    if (!is_metzler(F)) throw std::invalid_argument(std::string(who) + ": F is not Metzler");
}

double lambda_max_sym(const Matrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

void PositiveSystem::check() const {
    if (F.rows() != F.cols()) throw std::invalid_argument("PositiveSystem: F must be square");
    if (G.rows() != F.rows() || H.cols() != F.cols() || J.rows() != H.rows() ||
        J.cols() != G.cols()) {
        throw std::invalid_argument("PositiveSystem: inconsistent dimensions");
    }
    if (!is_metzler(F)) throw std::invalid_argument("PositiveSystem: F is not Metzler");
    if ((G.size() > 0 && G.minCoeff() < 0.0) || (H.size() > 0 && H.minCoeff() < 0.0) ||
        (J.size() > 0 && J.minCoeff() < 0.0)) {
        throw std::invalid_argument("PositiveSystem: G, H, J must be entrywise nonnegative");
    }
}

bool is_metzler(const Matrix& F) {
    if (F.rows() != F.cols()) throw std::invalid_argument("is_metzler: matrix must be square");
    for (int i = 0; i < F.rows(); ++i)
        for (int j = 0; j < F.cols(); ++j)
            if (i != j && F(i, j) < 0.0) return false;
    return true;
}

MetzlerCertificate metzler_stability_certificate(const Matrix& F) {
    require_metzler(F, "metzler_stability_certificate");
    MetzlerCertificate cert;
    cert.spectral_abscissa = F.rows() == 0 ? -1.0 : spectral_abscissa(F);
    cert.hurwitz = cert.spectral_abscissa < -kHurwitzGuard;
    if (!cert.hurwitz) return cert;

    const int n = static_cast<int>(F.rows());
    Vector ones = Vector::Ones(n);
    Eigen::PartialPivLU<Matrix> lu(F);
    cert.d = -lu.solve(ones);
    cert.e = -F.transpose().partialPivLu().solve(ones);
    Vector Fd = -(F * cert.d);
    Vector Fte = -(F.transpose() * cert.e);
    if (n > 0 && (cert.d.minCoeff() <= 0.0 || cert.e.minCoeff() <= 0.0 || Fd.minCoeff() <= 0.0 ||
                  Fte.minCoeff() <= 0.0)) {
        throw std::runtime_error("metzler_stability_certificate: certificate verification failed");
    }
    return cert;
}

double positive_hinf_norm(const PositiveSystem& ps) {
    ps.check();
    if (!is_hurwitz(ps.F, kHurwitzGuard)) {
        throw std::invalid_argument("positive_hinf_norm: F is not Hurwitz");
    }
    return static_gain(ps.F, ps.G, ps.H, ps.J);
}

std::optional<ScalingVectors> solve_scaling_lp(const PositiveSystem& ps, double delta) {
    ps.check();
    if (delta <= 0.0) throw std::invalid_argument("solve_scaling_lp: delta must be positive");
    if (!is_hurwitz(ps.F, kHurwitzGuard)) {
        throw std::invalid_argument("solve_scaling_lp: F is not Hurwitz");
    }
    const int n = ps.n(), ni = ps.inputs(), no = ps.outputs();

    // Change of variables fh = delta f, Gh = G/delta, Jh = J/delta turns the
    // level-delta conditions into the level-1 conditions for (F, Gh, H, Jh);
    // the feasibility slack then has no delta scale.
    Matrix Gh = ps.G / delta;
    Matrix Jh = ps.J / delta;

    // Variables x = [d (n), e (n), fh (ni), t]; g is eliminated as
    // g = H d + Jh fh (entrywise minimal choice, admissible since H, J >= 0).
    const int nv = 2 * n + ni + 1;
    const int tcol = nv - 1;
    const int rows = n + n + ni + 1;
    Matrix A = Matrix::Zero(rows, nv);
    Vector b = Vector::Zero(rows);
    int r = 0;
    // F d + Gh fh <= -t
    for (int i = 0; i < n; ++i, ++r) {
        A.row(r).segment(0, n) = ps.F.row(i);
        if (ni > 0) A.row(r).segment(2 * n, ni) = Gh.row(i);
        A(r, tcol) = 1.0;
    }
    // F^T e + H^T (H d + Jh fh) <= -t
    Matrix HtH = ps.H.transpose() * ps.H;  // n x n
    Matrix HtJ = ps.H.transpose() * Jh;    // n x ni
    for (int i = 0; i < n; ++i, ++r) {
        A.row(r).segment(0, n) = HtH.row(i);
        A.row(r).segment(n, n) = ps.F.transpose().row(i);
        if (ni > 0) A.row(r).segment(2 * n, ni) = HtJ.row(i);
        A(r, tcol) = 1.0;
    }
    // Gh^T e + Jh^T (H d + Jh fh) - fh <= -t
    Matrix JtH = Jh.transpose() * ps.H;  // ni x n
    Matrix JtJ = Jh.transpose() * Jh;    // ni x ni
    for (int l = 0; l < ni; ++l, ++r) {
        A.row(r).segment(0, n) = JtH.row(l);
        A.row(r).segment(n, n) = Gh.transpose().row(l);
        A.row(r).segment(2 * n, ni) = JtJ.row(l);
        A(r, 2 * n + l) -= 1.0;
        A(r, tcol) = 1.0;
    }
    // sum d + sum e + sum fh <= 1
    A.row(r).segment(0, 2 * n + ni).setOnes();
    Vector c = Vector::Zero(nv);
    c(tcol) = 1.0;
    b(rows - 1) = 1.0;

    lp::Solution sol = lp::solve(A, b, c);
    if (sol.status != lp::Status::Optimal || sol.objective <= kLpFeasibilitySlack) {
        return std::nullopt;
    }

    ScalingVectors sv;
    sv.d = sol.x.segment(0, n);
    sv.e = sol.x.segment(n, n);
    sv.f = sol.x.segment(2 * n, ni) / delta;
    sv.g = ps.H * sv.d + ps.J * sv.f;
    sv.delta = delta;
    sv.slack = sol.objective;

    // Entrywise verification of the certificate (strict rows by half the
    // slack; the input-budget row carries one factor of delta from fh).
    const double margin = 0.5 * sv.slack;
    bool ok = (n == 0 || (sv.d.minCoeff() > 0.0 && sv.e.minCoeff() > 0.0)) &&
              (ni == 0 || sv.f.minCoeff() > 0.0);
    Vector r1 = ps.F * sv.d + ps.G * sv.f;
    Vector r2 = ps.F.transpose() * sv.e + ps.H.transpose() * sv.g;
    Vector r3 = ps.G.transpose() * sv.e + ps.J.transpose() * sv.g - delta * delta * sv.f;
    if (n > 0 && (r1.maxCoeff() > -margin || r2.maxCoeff() > -margin)) ok = false;
    if (ni > 0 && r3.size() > 0 && r3.maxCoeff() > -margin * delta) ok = false;
    if (!ok) {
        throw std::runtime_error("solve_scaling_lp: solver returned an invalid certificate");
    }
    return sv;
}

Matrix diagonal_riccati_certificate(const PositiveSystem& ps, const ScalingVectors& sv) {
    ps.check();
    const int n = ps.n();
    if (sv.d.size() != n || sv.e.size() != n) {
        throw std::invalid_argument("diagonal_riccati_certificate: scaling vectors do not match");
    }
    Matrix P = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (sv.d(i) <= 0.0 || sv.e(i) <= 0.0) {
            throw std::invalid_argument("diagonal_riccati_certificate: d, e must be positive");
        }
        P(i, i) = sv.e(i) / sv.d(i);
    }

    // Riccati LMI of the bounded real lemma at level delta.
    const int ni = ps.inputs();
    Matrix S = sv.delta * sv.delta * Matrix::Identity(ni, ni) - ps.J.transpose() * ps.J;
    Eigen::LLT<Matrix> llt(S);
    if (ni > 0 && llt.info() != Eigen::Success) {
        throw std::invalid_argument("diagonal_riccati_certificate: delta <= sigma_max(J)");
    }
    Matrix lhs = P * ps.F + ps.F.transpose() * P + ps.H.transpose() * ps.H;
    if (ni > 0) {
        Matrix W = P * ps.G + ps.H.transpose() * ps.J;
        lhs += W * llt.solve(W.transpose());
    }
    double residual = lambda_max_sym(lhs);
    if (!(residual < 0.0)) {
        throw std::runtime_error("diagonal_riccati_certificate: LMI verification failed, residual " +
                                 std::to_string(residual));
    }
    return P;
}

Matrix lyapunov_diag_from_vectors(const Matrix& F, const Matrix& HG, const Vector& d,
                                  const Vector& e, GramianSide mode) {
    require_metzler(F, "lyapunov_diag_from_vectors");
    const int n = static_cast<int>(F.rows());
    if (d.size() != n || e.size() != n) {
        throw std::invalid_argument("lyapunov_diag_from_vectors: vector dimensions");
    }
    if (n > 0 && (d.minCoeff() <= 0.0 || e.minCoeff() <= 0.0)) {
        throw std::invalid_argument("lyapunov_diag_from_vectors: d, e must be positive");
    }

    const bool obs = mode == GramianSide::Observability;
    if (obs ? HG.cols() != n : HG.rows() != n) {
        throw std::invalid_argument("lyapunov_diag_from_vectors: H/G dimension mismatch");
    }
    Matrix Fd = obs ? F : Matrix(F.transpose());
    Vector fd = Fd * d;
    for (int i = 0; i < n; ++i) {
        if (!(fd(i) < 0.0)) {
            throw std::invalid_argument("lyapunov_diag_from_vectors: entry " + std::to_string(i) +
                                        " of F d is not negative");
        }
    }
    Matrix W = obs ? Matrix(HG.transpose() * HG) : Matrix(HG * HG.transpose());
    Vector bound = -Fd.transpose().partialPivLu().solve(W * d);  // -F^{-T} W d (obs mode)
    for (int i = 0; i < n; ++i) {
        if (!(e(i) > bound(i))) {
            throw std::invalid_argument("lyapunov_diag_from_vectors: entry " + std::to_string(i) +
                                        " of e does not dominate -F^{-T} W d = " +
                                        std::to_string(bound(i)));
        }
    }

    Matrix P = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) P(i, i) = e(i) / d(i);
    Matrix lhs = obs ? Matrix(F.transpose() * P + P * F + W) : Matrix(F * P + P * F.transpose() + W);
    double residual = lambda_max_sym(lhs);
    if (!(residual < 0.0)) {
        throw std::runtime_error("lyapunov_diag_from_vectors: LMI verification failed, residual " +
                                 std::to_string(residual));
    }
    return P;
}

}  // namespace blockcert
