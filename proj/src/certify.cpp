#include "blockcert/certify.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "blockcert/comparison.hpp"
#include "blockcert/linalg.hpp"

namespace blockcert {

namespace {

double lambda_max_sym(const Matrix& S) {
    if (S.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double lambda_min_sym(const Matrix& S) {
    if (S.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

int resolve_thread_cap(int max_threads) {
    int cap = max_threads > 0 ? max_threads : static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("BLOCKCERT_THREADS")) {
        int env_cap = std::atoi(env);
        if (env_cap >= 1 && env_cap < cap) cap = env_cap;
    }
    return cap;
}

}  // namespace

MultiplierScalars multipliers_from_scalings(const PositiveSystem& ps, const ScalingVectors& sv) {
    ps.check();
    const int n = ps.n(), ni = ps.inputs(), no = ps.outputs();
    if (sv.d.size() != n || sv.e.size() != n || sv.f.size() != ni || sv.g.size() != no) {
        throw std::invalid_argument("multipliers_from_scalings: scaling vectors do not match");
    }
    for (int k = 0; k < no; ++k) {
        if (sv.g(k) <= 0.0 && (ps.H.row(k).cwiseAbs().maxCoeff() > 0.0 ||
                               (ni > 0 && ps.J.row(k).cwiseAbs().maxCoeff() > 0.0))) {
            throw std::invalid_argument("multipliers_from_scalings: g_" + std::to_string(k + 1) +
                                        " = 0 with a nonzero H/J row");
        }
    }

    MultiplierScalars ms;
    ms.phi.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ms.phi(i, j) = std::abs(ps.F(i, j)) == 0.0 ? 0.0 : std::abs(ps.F(i, j)) * sv.e(i) / sv.d(j);
    ms.gamma.resize(n, ni);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < ni; ++l)
            ms.gamma(i, l) = ps.G(i, l) == 0.0 ? 0.0 : ps.G(i, l) * sv.e(i) / sv.f(l);
    ms.eta.resize(no, n);
    for (int k = 0; k < no; ++k)
        for (int j = 0; j < n; ++j)
            ms.eta(k, j) = ps.H(k, j) == 0.0 ? 0.0 : ps.H(k, j) * sv.d(j) / sv.g(k);
    ms.lambda.resize(no, ni);
    ms.mu.resize(no, ni);
    for (int k = 0; k < no; ++k) {
        for (int l = 0; l < ni; ++l) {
            ms.lambda(k, l) = ps.J(k, l) == 0.0 ? 0.0 : ps.J(k, l) * sv.f(l) / sv.g(k);
            ms.mu(k, l) = ps.J(k, l) == 0.0 ? 0.0 : ps.J(k, l) * sv.g(k) / sv.f(l);
        }
    }
    return ms;
}

std::vector<Matrix> block_riccati_solutions(const PartitionedSystem& sys,
                                            const MultiplierScalars& ms, int max_threads) {
    const Partition& ap = sys.state_partition;
    const Partition& ip = sys.input_partition;
    const int n = ap.count(), ni = ip.count();
    if (ms.phi.rows() != n || ms.gamma.rows() != n || ms.gamma.cols() != ni) {
        throw std::invalid_argument("block_riccati_solutions: multipliers do not match partitions");
    }

    std::vector<Matrix> blocks(static_cast<size_t>(n));
    std::vector<std::string> errors(static_cast<size_t>(n));
    auto solve_block = [&](int i) {
        try {
            const int ki = ap.size(i);
            Matrix Aii = extract_block(sys.A, ap, ap, i, i);
            Matrix R = Matrix::Zero(ki, ki);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                Matrix Aij = extract_block(sys.A, ap, ap, i, j);
                if (Aij.isZero(0.0)) continue;
                if (ms.phi(i, j) <= 0.0) {
                    throw std::runtime_error("zero multiplier phi for nonzero block A_" +
                                             std::to_string(i + 1) + std::to_string(j + 1));
                }
                R += Aij * Aij.transpose() / ms.phi(i, j);
            }
            for (int l = 0; l < ni; ++l) {
                Matrix Bil = extract_block(sys.B, ap, ip, i, l);
                if (Bil.isZero(0.0)) continue;
                if (ms.gamma(i, l) <= 0.0) {
                    throw std::runtime_error("zero multiplier gamma for nonzero block B_" +
                                             std::to_string(i + 1) + std::to_string(l + 1));
                }
                R += Bil * Bil.transpose() / ms.gamma(i, l);
            }
            Matrix Q = ms.phi(i, i) * Matrix::Identity(ki, ki);
            if (R.isZero(0.0)) {
                blocks[static_cast<size_t>(i)] = solve_lyapunov(Aii, Q);
            } else {
                blocks[static_cast<size_t>(i)] = solve_riccati(Aii, R, Q);
            }
        } catch (const std::exception& ex) {
            errors[static_cast<size_t>(i)] = "block " + std::to_string(i + 1) + ": " + ex.what();
        }
    };

    const int cap = std::min(resolve_thread_cap(max_threads), n == 0 ? 1 : n);
    if (cap <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) solve_block(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(cap));
        std::atomic<int> next{0};
        for (int t = 0; t < cap; ++t) {
            pool.emplace_back([&]() {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) solve_block(i);
            });
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors) {
        if (!err.empty()) throw std::runtime_error("block_riccati_solutions: " + err);
    }
    return blocks;
}

Matrix assemble_blockdiag(const std::vector<Matrix>& blocks) {
    int total = 0;
    for (const auto& blk : blocks) {
        if (blk.rows() != blk.cols()) {
            throw std::invalid_argument("assemble_blockdiag: blocks must be square");
        }
        total += static_cast<int>(blk.rows());
    }
    Matrix P = Matrix::Zero(total, total);
    int off = 0;
    for (const auto& blk : blocks) {
        P.block(off, off, blk.rows(), blk.cols()) = blk;
        off += static_cast<int>(blk.rows());
    }
    return P;
}

double verify_lyapunov_lmi(const Matrix& A, const Matrix& P) {
    if (A.rows() != A.cols() || P.rows() != A.rows() || P.cols() != A.cols()) {
        throw std::invalid_argument("verify_lyapunov_lmi: dimension mismatch");
    }
    return lambda_max_sym(P * A + A.transpose() * P);
}

double verify_riccati_lmi(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D,
                          const Matrix& P, double delta) {
    const int n = static_cast<int>(A.rows());
    const int ni = static_cast<int>(B.cols());
    if (A.cols() != n || B.rows() != n || C.cols() != n || P.rows() != n || P.cols() != n ||
        D.rows() != C.rows() || D.cols() != ni) {
        throw std::invalid_argument("verify_riccati_lmi: dimension mismatch");
    }
    Matrix lhs = P * A + A.transpose() * P + C.transpose() * C;
    if (ni > 0) {
        Matrix S = delta * delta * Matrix::Identity(ni, ni) - D.transpose() * D;
        Eigen::LLT<Matrix> llt(S);
        if (llt.info() != Eigen::Success) {
            throw std::invalid_argument("verify_riccati_lmi: delta <= sigma_max(D)");
        }
        Matrix W = P * B + C.transpose() * D;
        lhs += W * llt.solve(W.transpose());
    }
    return lambda_max_sym(lhs);
}

double verify_riccati_lmi(const PartitionedSystem& sys, const Matrix& P, double delta) {
    return verify_riccati_lmi(sys.A, sys.B, sys.C, sys.D, P, delta);
}

MultiplierMatrices lift_multipliers(const MultiplierScalars& ms, const PartitionedSystem& sys) {
    const Partition& ap = sys.state_partition;
    const Partition& ip = sys.input_partition;
    const Partition& op = sys.output_partition;
    const int n = ap.count(), ni = ip.count(), no = op.count();
    MultiplierMatrices mm;
    auto grid = [](int r, int c) {
        return std::vector<std::vector<Matrix>>(static_cast<size_t>(r),
                                                std::vector<Matrix>(static_cast<size_t>(c)));
    };
    mm.phi = grid(n, n);
    mm.gamma = grid(n, ni);
    mm.xi = grid(no, n);
    mm.upsilon = grid(no, ni);
    mm.lambda = grid(no, ni);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (ms.phi(i, j) > 0.0)
                mm.phi[i][j] = ms.phi(i, j) * Matrix::Identity(ap.size(j), ap.size(j));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < ni; ++l)
            if (ms.gamma(i, l) > 0.0)
                mm.gamma[i][l] = ms.gamma(i, l) * Matrix::Identity(ip.size(l), ip.size(l));
    for (int k = 0; k < no; ++k)
        for (int j = 0; j < n; ++j)
            if (ms.eta(k, j) > 0.0)
                mm.xi[k][j] = ms.eta(k, j) * Matrix::Identity(op.size(k), op.size(k));
    for (int k = 0; k < no; ++k) {
        for (int l = 0; l < ni; ++l) {
            if (ms.mu(k, l) > 0.0)
                mm.upsilon[k][l] = ms.mu(k, l) * Matrix::Identity(ip.size(l), ip.size(l));
            if (ms.lambda(k, l) > 0.0)
                mm.lambda[k][l] = ms.lambda(k, l) * Matrix::Identity(op.size(k), op.size(k));
        }
    }
    return mm;
}

bool MultiplierLmiResiduals::pass(double tol) const {
    for (double r : block_riccati)
        if (!(r < 0.0)) return false;
    for (int k = 0; k < feedthrough.rows(); ++k)
        for (int l = 0; l < feedthrough.cols(); ++l)
            if (feedthrough(k, l) > tol) return false;
    for (double r : output_budget)
        if (r > tol) return false;
    for (double r : input_budget)
        if (!(r < 0.0)) return false;
    return true;
}

MultiplierLmiResiduals verify_multiplier_lmis(const PartitionedSystem& sys,
                                              const std::vector<Matrix>& blocks,
                                              const MultiplierMatrices& mm, double delta) {
    const Partition& ap = sys.state_partition;
    const Partition& ip = sys.input_partition;
    const Partition& op = sys.output_partition;
    const int n = ap.count(), ni = ip.count(), no = op.count();
    if (static_cast<int>(blocks.size()) != n) {
        throw std::invalid_argument("verify_multiplier_lmis: wrong number of blocks");
    }

    MultiplierLmiResiduals res;

    // (a) per state block.
    for (int i = 0; i < n; ++i) {
        const int ki = ap.size(i);
        const Matrix& Pi = blocks[static_cast<size_t>(i)];
        Matrix Aii = extract_block(sys.A, ap, ap, i, i);
        Matrix lhs = Pi * Aii + Aii.transpose() * Pi;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (mm.phi[static_cast<size_t>(j)][static_cast<size_t>(i)].size() > 0)
                lhs += mm.phi[static_cast<size_t>(j)][static_cast<size_t>(i)];
        }
        Matrix quad = Matrix::Zero(ki, ki);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            Matrix Aij = extract_block(sys.A, ap, ap, i, j);
            if (Aij.isZero(0.0)) continue;
            const Matrix& Phi = mm.phi[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (Phi.size() == 0) {
                throw std::invalid_argument("verify_multiplier_lmis: missing Phi_" +
                                            std::to_string(i + 1) + std::to_string(j + 1) +
                                            " for nonzero A block");
            }
            quad += Aij * Phi.partialPivLu().solve(Aij.transpose());
        }
        for (int l = 0; l < ni; ++l) {
            Matrix Bil = extract_block(sys.B, ap, ip, i, l);
            if (Bil.isZero(0.0)) continue;
            const Matrix& Gam = mm.gamma[static_cast<size_t>(i)][static_cast<size_t>(l)];
            if (Gam.size() == 0) {
                throw std::invalid_argument("verify_multiplier_lmis: missing Gamma_" +
                                            std::to_string(i + 1) + std::to_string(l + 1) +
                                            " for nonzero B block");
            }
            quad += Bil * Gam.partialPivLu().solve(Bil.transpose());
        }
        for (int k = 0; k < no; ++k) {
            Matrix Cki = extract_block(sys.C, op, ap, k, i);
            if (Cki.isZero(0.0)) continue;
            const Matrix& Xi = mm.xi[static_cast<size_t>(k)][static_cast<size_t>(i)];
            if (Xi.size() == 0) {
                throw std::invalid_argument("verify_multiplier_lmis: missing Xi_" +
                                            std::to_string(k + 1) + std::to_string(i + 1) +
                                            " for nonzero C block");
            }
            lhs += Cki.transpose() * Xi.partialPivLu().solve(Cki);
        }
        lhs += Pi * quad * Pi;
        res.block_riccati.push_back(lambda_max_sym(lhs));
    }

    // (b) feedthrough couplings.
    res.feedthrough = Matrix::Zero(no, ni);
    for (int k = 0; k < no; ++k) {
        for (int l = 0; l < ni; ++l) {
            Matrix Dkl = extract_block(sys.D, op, ip, k, l);
            const int mk = op.size(k), ql = ip.size(l);
            Matrix Ups = mm.upsilon[static_cast<size_t>(k)][static_cast<size_t>(l)].size() > 0
                             ? mm.upsilon[static_cast<size_t>(k)][static_cast<size_t>(l)]
                             : Matrix::Zero(ql, ql);
            Matrix Lam = mm.lambda[static_cast<size_t>(k)][static_cast<size_t>(l)].size() > 0
                             ? mm.lambda[static_cast<size_t>(k)][static_cast<size_t>(l)]
                             : Matrix::Zero(mk, mk);
            Matrix lmi(ql + mk, ql + mk);
            lmi << Ups, -Dkl.transpose(), -Dkl, Lam;
            res.feedthrough(k, l) = -lambda_min_sym(lmi);
        }
    }

    // (c) output budgets.
    for (int k = 0; k < no; ++k) {
        const int mk = op.size(k);
        Matrix sum = -Matrix::Identity(mk, mk);
        for (int i = 0; i < n; ++i)
            if (mm.xi[static_cast<size_t>(k)][static_cast<size_t>(i)].size() > 0)
                sum += mm.xi[static_cast<size_t>(k)][static_cast<size_t>(i)];
        for (int l = 0; l < ni; ++l)
            if (mm.lambda[static_cast<size_t>(k)][static_cast<size_t>(l)].size() > 0)
                sum += mm.lambda[static_cast<size_t>(k)][static_cast<size_t>(l)];
        res.output_budget.push_back(lambda_max_sym(sum));
    }

    // (d) input budgets.
    for (int l = 0; l < ni; ++l) {
        const int ql = ip.size(l);
        Matrix sum = -delta * delta * Matrix::Identity(ql, ql);
        for (int i = 0; i < n; ++i)
            if (mm.gamma[static_cast<size_t>(i)][static_cast<size_t>(l)].size() > 0)
                sum += mm.gamma[static_cast<size_t>(i)][static_cast<size_t>(l)];
        for (int k = 0; k < no; ++k)
            if (mm.upsilon[static_cast<size_t>(k)][static_cast<size_t>(l)].size() > 0)
                sum += mm.upsilon[static_cast<size_t>(k)][static_cast<size_t>(l)];
        res.input_budget.push_back(lambda_max_sym(sum));
    }
    return res;
}

BlockDiagonalCertificate certify_hinf(const PartitionedSystem& sys, std::optional<double> delta,
                                      const CertifyOptions& opts) {
    BlockDiagonalCertificate cert;
    const double t_start = now_seconds();

    ValidationReport rep = validate(sys);
    if (!rep.dimensions_ok || !rep.all_diagonal_blocks_hurwitz) {
        cert.status = CertifyStatus::InvalidSystem;
        cert.message = rep.message;
        return cert;
    }

    // Step 1: comparison system and its norm.
    double t0 = now_seconds();
    PositiveSystem ps = comparison_system_hard(sys, opts.hinf_tol);
    if (!is_hurwitz(ps.F, kHurwitzGuard)) {
        cert.status = CertifyStatus::ComparisonUnstable;
        cert.message = "comparison matrix M^a(A) is not Hurwitz (abscissa " +
                       std::to_string(spectral_abscissa(ps.F)) + "); test is inconclusive";
        cert.timings.comparison_s = now_seconds() - t0;
        cert.timings.total_s = now_seconds() - t_start;
        return cert;
    }
    cert.comparison_norm = positive_hinf_norm(ps);
    cert.timings.comparison_s = now_seconds() - t0;

    double level;
    if (delta.has_value()) {
        level = *delta;
        if (level <= cert.comparison_norm) {
            cert.status = CertifyStatus::DeltaBelowComparisonNorm;
            cert.message = "requested delta " + std::to_string(level) +
                           " is not above the comparison-system norm " +
                           std::to_string(cert.comparison_norm);
            cert.timings.total_s = now_seconds() - t_start;
            return cert;
        }
    } else {
        // Prop. 3(d) needs delta strictly above the comparison norm; for a
        // zero-norm comparison system any positive level works.
        level = cert.comparison_norm > 0.0 ? 1.001 * cert.comparison_norm : 1.0;
    }
    cert.delta = level;

    // Step 2: scaling LP.
    t0 = now_seconds();
    std::optional<ScalingVectors> sv = solve_scaling_lp(ps, level);
    cert.timings.lp_s = now_seconds() - t0;
    if (!sv.has_value()) {
        cert.status = CertifyStatus::DeltaBelowComparisonNorm;
        cert.message = "scaling LP infeasible at delta = " + std::to_string(level);
        cert.timings.total_s = now_seconds() - t_start;
        return cert;
    }
    cert.scalings = *sv;
    cert.multipliers = multipliers_from_scalings(ps, *sv);

    // Step 3: per-block Riccati equations.
    t0 = now_seconds();
    cert.blocks = block_riccati_solutions(sys, cert.multipliers, opts.max_threads);
    cert.timings.riccati_s = now_seconds() - t0;

    t0 = now_seconds();
    Matrix P = assemble_blockdiag(cert.blocks);
    cert.min_block_eigenvalue = std::numeric_limits<double>::infinity();
    for (const auto& blk : cert.blocks) {
        cert.min_block_eigenvalue = std::min(cert.min_block_eigenvalue, lambda_min_sym(blk));
    }
    cert.lyapunov_residual = verify_lyapunov_lmi(sys.A, P);
    cert.riccati_residual = verify_riccati_lmi(sys.A, sys.B, sys.C, sys.D, P, level);
    cert.timings.verify_s = now_seconds() - t0;
    cert.timings.total_s = now_seconds() - t_start;

    const double scale = 1.0 + sys.A.cwiseAbs().maxCoeff();
    const bool ok = cert.min_block_eigenvalue > 0.0 &&
                    cert.lyapunov_residual < -1e-10 * scale &&
                    cert.riccati_residual < -1e-10 * scale;
    if (!ok) {
        cert.status = CertifyStatus::InvalidSystem;
        cert.message = "certificate verification failed (lyapunov residual " +
                       std::to_string(cert.lyapunov_residual) + ", riccati residual " +
                       std::to_string(cert.riccati_residual) + ")";
        return cert;
    }
    cert.status = CertifyStatus::Certified;
    return cert;
}

BlockDiagonalCertificate certify_lyapunov(const Matrix& A, const Partition& partition,
                                          const CertifyOptions& opts) {
    PartitionedSystem sys;
    sys.A = A;
    sys.state_partition = partition;
    sys.B = Matrix::Zero(A.rows(), 0);
    sys.C = Matrix::Zero(0, A.cols());
    sys.D = Matrix::Zero(0, 0);
    sys.input_partition = Partition{};
    sys.output_partition = Partition{};
    return certify_hinf(sys, std::nullopt, opts);
}

}  // namespace blockcert
