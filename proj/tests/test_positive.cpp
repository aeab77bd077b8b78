#include <doctest.h>

#include "blockcert/linalg.hpp"
#include "blockcert/positive.hpp"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>

using namespace blockcert;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix M(2, 2);
    M << a, b, c, d;
    return M;
}

double lmax(const Matrix& S) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

PositiveSystem make_ps(const Matrix& F, const Matrix& G, const Matrix& H, const Matrix& J) {
    PositiveSystem ps;
    ps.F = F;
    ps.G = G;
    ps.H = H;
    ps.J = J;
    return ps;
}

}  // namespace

TEST_CASE("is_metzler") {
    CHECK(is_metzler(mat2(-1, 0.5, 0.5, -1)));
    CHECK_FALSE(is_metzler(mat2(-1, -0.1, 0, -1)));
    CHECK(is_metzler(Matrix::Constant(1, 1, -5.0)));
}

TEST_CASE("metzler_stability_certificate basic cases") {
    MetzlerCertificate cert = metzler_stability_certificate(mat2(-2, 1, 1, -2));
    REQUIRE(cert.hurwitz);
    CHECK(cert.d(0) == doctest::Approx(1.0));
    CHECK(cert.d(1) == doctest::Approx(1.0));
    CHECK(cert.e(0) == doctest::Approx(1.0));

    cert = metzler_stability_certificate(mat2(-1, 2, 2, -1));
    CHECK_FALSE(cert.hurwitz);
    CHECK(cert.spectral_abscissa == doctest::Approx(1.0));

    cert = metzler_stability_certificate(mat2(-1, 0, 0, -4));
    CHECK(cert.d(0) == doctest::Approx(1.0));
    CHECK(cert.d(1) == doctest::Approx(0.25));

    CHECK_THROWS_AS(metzler_stability_certificate(mat2(-1, -1, 0, -1)), std::invalid_argument);
}

TEST_CASE("Prop 2 equivalences on random Metzler matrices") {
    oracles::Rng rng(43);
    int stable_count = 0;
    for (int t = 0; t < 200; ++t) {
        int n = rng.integer(2, 6);
        Matrix F = oracles::random_matrix(rng, n, n, 0.0, 1.0);
        F.diagonal().array() -= rng.uniform(0.5, static_cast<double>(n));
        MetzlerCertificate cert = metzler_stability_certificate(F);
        CHECK(cert.hurwitz == is_hurwitz(F, kHurwitzGuard));
        if (cert.hurwitz) {
            ++stable_count;
            CHECK(cert.d.minCoeff() > 0.0);
            CHECK(cert.e.minCoeff() > 0.0);
            CHECK((-(F * cert.d)).minCoeff() > 0.0);
            CHECK((-(F.transpose() * cert.e)).minCoeff() > 0.0);
            // Prop 2(d): diag(e_i/d_i) solves the Lyapunov LMI.
            Matrix P = (cert.e.array() / cert.d.array()).matrix().asDiagonal();
            CHECK(lmax(P * F + F.transpose() * P) < 0.0);
        }
    }
    CHECK(stable_count > 40);
}

TEST_CASE("positive_hinf_norm closed forms") {
    CHECK(positive_hinf_norm(make_ps(mat2(-2, 1, 1, -2), Matrix::Identity(2, 2),
                                     Matrix::Identity(2, 2), Matrix::Zero(2, 2))) ==
          doctest::Approx(1.0));
    CHECK(positive_hinf_norm(make_ps(Matrix::Constant(1, 1, -1.0), Matrix::Ones(1, 1),
                                     Matrix::Ones(1, 1), Matrix::Constant(1, 1, 0.5))) ==
          doctest::Approx(1.5));
    CHECK_THROWS_AS(positive_hinf_norm(make_ps(mat2(-1, 2, 2, -1), Matrix::Identity(2, 2),
                                               Matrix::Identity(2, 2), Matrix::Zero(2, 2))),
                    std::invalid_argument);
}

TEST_CASE("positive_hinf_norm equals the Hamiltonian bisection norm") {
    oracles::Rng rng(47);
    for (int t = 0; t < 50; ++t) {
        auto sys = oracles::random_positive_system(rng, rng.integer(1, 6), rng.integer(1, 3),
                                                   rng.integer(1, 3));
        PositiveSystem ps = make_ps(sys.F, sys.G, sys.H, sys.J);
        double dc = positive_hinf_norm(ps);
        double ham = hinf_norm(ps.F, ps.G, ps.H, ps.J, 1e-10);
        CHECK(dc == doctest::Approx(ham).epsilon(1e-8));
    }
}

TEST_CASE("solve_scaling_lp feasibility threshold around the norm") {
    PositiveSystem ps = make_ps(mat2(-2, 1, 1, -2), Matrix::Identity(2, 2),
                                Matrix::Identity(2, 2), Matrix::Zero(2, 2));
    CHECK(solve_scaling_lp(ps, 1.1).has_value());   // norm = 1
    CHECK_FALSE(solve_scaling_lp(ps, 0.9).has_value());

    // pure stability: any level works
    PositiveSystem stab = make_ps(mat2(-2, 1, 1, -2), Matrix::Zero(2, 1), Matrix::Zero(1, 2),
                                  Matrix::Zero(1, 1));
    auto sv = solve_scaling_lp(stab, 1e-3);
    REQUIRE(sv.has_value());
    CHECK(sv->g.isZero(0.0));
    CHECK(sv->f.minCoeff() > 0.0);
}

TEST_CASE("scaling vectors satisfy all four inequalities entrywise") {
    oracles::Rng rng(53);
    for (int t = 0; t < 60; ++t) {
        auto sys = oracles::random_positive_system(rng, rng.integer(2, 8), rng.integer(1, 3),
                                                   rng.integer(1, 3));
        PositiveSystem ps = make_ps(sys.F, sys.G, sys.H, sys.J);
        double norm = positive_hinf_norm(ps);
        double delta = norm * rng.uniform(1.01, 3.0) + 1e-6;
        auto sv = solve_scaling_lp(ps, delta);
        REQUIRE(sv.has_value());
        CHECK((ps.F * sv->d + ps.G * sv->f).maxCoeff() < 0.0);
        CHECK((ps.H * sv->d + ps.J * sv->f - sv->g).maxCoeff() <= 1e-15);
        CHECK((ps.F.transpose() * sv->e + ps.H.transpose() * sv->g).maxCoeff() < 0.0);
        CHECK((ps.G.transpose() * sv->e + ps.J.transpose() * sv->g -
               delta * delta * sv->f).maxCoeff() < 0.0);
    }
}

TEST_CASE("Prop 3 equivalence: LP feasibility tracks the norm") {
    oracles::Rng rng(59);
    for (int t = 0; t < 60; ++t) {
        auto sys = oracles::random_positive_system(rng, rng.integer(1, 8), rng.integer(1, 3),
                                                   rng.integer(1, 3));
        PositiveSystem ps = make_ps(sys.F, sys.G, sys.H, sys.J);
        double norm = positive_hinf_norm(ps);
        for (double factor : {0.5, 0.95, 1.05, 2.0}) {
            double delta = norm * factor;
            if (delta <= 0.0) continue;
            bool feasible = solve_scaling_lp(ps, delta).has_value();
            CHECK(feasible == (factor > 1.0));
        }
    }
}

TEST_CASE("diagonal_riccati_certificate verifies the positive-system LMI") {
    PositiveSystem ps = make_ps(mat2(-2, 1, 1, -2), Matrix::Identity(2, 2),
                                Matrix::Identity(2, 2), Matrix::Zero(2, 2));
    auto sv = solve_scaling_lp(ps, 1.1);
    REQUIRE(sv.has_value());
    Matrix P = diagonal_riccati_certificate(ps, *sv);
    CHECK(P(0, 1) == 0.0);
    CHECK(P(0, 0) > 0.0);

    // scalar pure stability: P = e/d for any positive scalars
    PositiveSystem scal = make_ps(Matrix::Constant(1, 1, -1.0), Matrix::Zero(1, 1),
                                  Matrix::Zero(1, 1), Matrix::Zero(1, 1));
    ScalingVectors hand;
    hand.d = Vector::Constant(1, 2.0);
    hand.e = Vector::Constant(1, 3.0);
    hand.f = Vector::Constant(1, 1.0);
    hand.g = Vector::Zero(1);
    hand.delta = 1.0;
    CHECK(diagonal_riccati_certificate(scal, hand)(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("symmetric F with d = e gives the identity certificate") {
    Matrix F = mat2(-2, 1, 1, -2);
    MetzlerCertificate cert = metzler_stability_certificate(F);
    PositiveSystem ps = make_ps(F, Matrix::Zero(2, 1), Matrix::Zero(1, 2), Matrix::Zero(1, 1));
    ScalingVectors sv;
    sv.d = cert.d;
    sv.e = cert.e;
    sv.f = Vector::Ones(1);
    sv.g = Vector::Zero(1);
    sv.delta = 1.0;
    Matrix P = diagonal_riccati_certificate(ps, sv);
    CHECK(P.isApprox(Matrix::Identity(2, 2), 1e-12));
}

TEST_CASE("lyapunov_diag_from_vectors observability form") {
    Matrix F = Matrix::Constant(1, 1, -1.0);
    Matrix H = Matrix::Ones(1, 1);
    Matrix Q = lyapunov_diag_from_vectors(F, H, Vector::Ones(1), Vector::Constant(1, 2.0),
                                          GramianSide::Observability);
    CHECK(Q(0, 0) == doctest::Approx(2.0));
    // -2*2 + 1 < 0 holds

    Matrix F2 = mat2(-2, 1, 1, -2);
    Vector d = Vector::Ones(2);
    Vector bound = -F2.transpose().partialPivLu().solve(Matrix(Matrix::Identity(2, 2)) * d);
    Vector e = 1.1 * bound;
    Matrix Q2 = lyapunov_diag_from_vectors(F2, Matrix::Identity(2, 2), d, e,
                                           GramianSide::Observability);
    CHECK(lmax(F2.transpose() * Q2 + Q2 * F2 + Matrix::Identity(2, 2)) < 0.0);

    // e below the bound must be rejected entrywise
    CHECK_THROWS_AS(lyapunov_diag_from_vectors(F2, Matrix::Identity(2, 2), d, 0.9 * bound,
                                               GramianSide::Observability),
                    std::invalid_argument);
}

TEST_CASE("lyapunov_diag_from_vectors controllability form") {
    oracles::Rng rng(61);
    for (int t = 0; t < 30; ++t) {
        int n = rng.integer(2, 5);
        Matrix F = oracles::random_matrix(rng, n, n, 0.0, 1.0);
        F.diagonal().array() -= rng.uniform(1.0, 2.0) * n;
        if (!is_hurwitz(F, kHurwitzGuard)) continue;
        Matrix G = oracles::random_matrix(rng, n, 2, 0.0, 1.0);
        MetzlerCertificate cert = metzler_stability_certificate(F.transpose());
        Vector d = cert.d;  // F^T d < 0
        Vector bound = -F.partialPivLu().solve(G * G.transpose() * d);
        Vector e = 1.05 * bound.cwiseMax(1e-8);
        Matrix P = lyapunov_diag_from_vectors(F, G, d, e, GramianSide::Controllability);
        CHECK(lmax(F * P + P * F.transpose() + G * G.transpose()) < 0.0);
    }
}

TEST_CASE("zero H reduces the observability form to plain diagonal stability") {
    Matrix F = mat2(-2, 1, 1, -2);
    MetzlerCertificate cert = metzler_stability_certificate(F);
    Matrix Q = lyapunov_diag_from_vectors(F, Matrix::Zero(1, 2), cert.d,
                                          Vector::Constant(2, 0.5), GramianSide::Observability);
    CHECK(lmax(F.transpose() * Q + Q * F) < 0.0);
}
