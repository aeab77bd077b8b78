#include "blockcert/simplex.hpp"

#include <stdexcept>
#include <vector>

namespace blockcert::lp {

namespace {

constexpr double kTol = 1e-11;

// Tableau rows are the constraint dictionary; `cost` holds reduced costs of a
// maximization objective. basis[i] is the column basic in row i.
enum class PhaseResult { Optimal, Unbounded };

PhaseResult run_phase(Matrix& T, Vector& rhs, Eigen::RowVectorXd& cost, double& objective,
                      std::vector<int>& basis) {
    const int m = static_cast<int>(T.rows());
    const long max_iter = 50L * (T.cols() + m) + 1000L;
    for (long iter = 0; iter < max_iter; ++iter) {
        // Bland: entering column = smallest index with positive reduced cost.
        int enter = -1;
        for (int j = 0; j < T.cols(); ++j) {
            if (cost(j) > kTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) return PhaseResult::Optimal;

        // Ratio test; ties broken by smallest basic variable index.
        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            if (T(i, enter) > kTol) {
                double ratio = rhs(i) / T(i, enter);
                if (leave < 0 || ratio < best_ratio - kTol ||
                    (ratio < best_ratio + kTol && basis[static_cast<size_t>(i)] <
                                                      basis[static_cast<size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) return PhaseResult::Unbounded;

        // Pivot on (leave, enter).
        double piv = T(leave, enter);
        T.row(leave) /= piv;
        rhs(leave) /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            double f = T(i, enter);
            if (f != 0.0) {
                T.row(i) -= f * T.row(leave);
                rhs(i) -= f * rhs(leave);
            }
        }
        double fc = cost(enter);
        if (fc != 0.0) {
            cost -= fc * T.row(leave);
            objective += fc * rhs(leave);
        }
        basis[static_cast<size_t>(leave)] = enter;
    }
    throw std::runtime_error("simplex: iteration limit exceeded");
}

}  // namespace

Solution solve(const Matrix& A, const Vector& b, const Vector& c) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (b.size() != m || c.size() != n) {
        throw std::invalid_argument("lp::solve: inconsistent dimensions");
    }

    // Equality form: A x + s = b with slacks s; rows with b < 0 are negated
    // and receive an artificial variable for phase 1.
    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i) {
        if (b(i) < 0.0) art_rows.push_back(i);
    }
    const int na = static_cast<int>(art_rows.size());
    const int ncols = n + m + na;

    Matrix T = Matrix::Zero(m, ncols);
    Vector rhs = b;
    T.leftCols(n) = A;
    T.middleCols(n, m).setIdentity();
    for (int k = 0; k < na; ++k) {
        int i = art_rows[static_cast<size_t>(k)];
        T.row(i) = -T.row(i).eval();
        rhs(i) = -rhs(i);
        T(i, n + m + k) = 1.0;
    }

    std::vector<int> basis(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) basis[static_cast<size_t>(i)] = n + i;
    for (int k = 0; k < na; ++k) basis[static_cast<size_t>(art_rows[static_cast<size_t>(k)])] = n + m + k;

    if (na > 0) {
        // Phase 1: maximize -sum(artificials).
        Eigen::RowVectorXd cost1 = Eigen::RowVectorXd::Zero(ncols);
        double obj1 = 0.0;
        for (int k = 0; k < na; ++k) cost1(n + m + k) = -1.0;
        // Price out the artificial basis: z = -sum(artificials) = -sum(rhs).
        for (int k = 0; k < na; ++k) {
            int i = art_rows[static_cast<size_t>(k)];
            cost1 += T.row(i);
            obj1 -= rhs(i);
        }
        if (run_phase(T, rhs, cost1, obj1, basis) == PhaseResult::Unbounded) {
            throw std::runtime_error("simplex: phase 1 unbounded");
        }
        if (obj1 < -1e-8) {
            return {Status::Infeasible, Vector(), 0.0};
        }
        // Drive any artificial still basic (at zero level) out of the basis.
        for (int i = 0; i < m; ++i) {
            if (basis[static_cast<size_t>(i)] >= n + m) {
                int enter = -1;
                for (int j = 0; j < n + m; ++j) {
                    if (std::abs(T(i, j)) > kTol) {
                        enter = j;
                        break;
                    }
                }
                if (enter < 0) continue;  // redundant row
                double piv = T(i, enter);
                T.row(i) /= piv;
                rhs(i) /= piv;
                for (int r = 0; r < m; ++r) {
                    if (r == i) continue;
                    double f = T(r, enter);
                    if (f != 0.0) {
                        T.row(r) -= f * T.row(i);
                        rhs(r) -= f * rhs(i);
                    }
                }
                basis[static_cast<size_t>(i)] = enter;
            }
        }
    }

    // Phase 2 over structural + slack columns only (artificials frozen out).
    Matrix T2 = T.leftCols(n + m);
    Eigen::RowVectorXd cost2 = Eigen::RowVectorXd::Zero(n + m);
    cost2.head(n) = c.transpose();
    double obj2 = 0.0;
    for (int i = 0; i < m; ++i) {
        int bi = basis[static_cast<size_t>(i)];
        if (bi < n + m && cost2(bi) != 0.0) {
            double f = cost2(bi);
            cost2 -= f * T2.row(i);
            obj2 += f * rhs(i);
        }
    }
    if (run_phase(T2, rhs, cost2, obj2, basis) == PhaseResult::Unbounded) {
        return {Status::Unbounded, Vector(), 0.0};
    }

    Solution sol;
    sol.status = Status::Optimal;
    sol.objective = obj2;
    sol.x = Vector::Zero(n);
    for (int i = 0; i < m; ++i) {
        int bi = basis[static_cast<size_t>(i)];
        if (bi < n) sol.x(bi) = rhs(i);
    }
    return sol;
}

}  // namespace blockcert::lp
