#include "blockcert/flow_bounds.hpp"

#include <cmath>
#include <stdexcept>

#include "blockcert/comparison.hpp"
#include "blockcert/positive.hpp"

namespace blockcert {

BoundedTrajectoryReport comparison_trajectory_bound(const PartitionedSystem& sys, const Vector& x0,
                                                    const InputSignal& input, double horizon,
                                                    double step) {
    ValidationReport rep = validate(sys);
    if (!rep.dimensions_ok) {
        throw std::invalid_argument("comparison_trajectory_bound: " + rep.message);
    }
    if (x0.size() != sys.A.rows()) {
        throw std::invalid_argument("comparison_trajectory_bound: x0 dimension mismatch");
    }
    const Partition& ap = sys.state_partition;
    const Partition& ip = sys.input_partition;
    const Partition& op = sys.output_partition;
    const int n = ap.count(), ni = ip.count(), no = op.count();

    PositiveSystem ps = comparison_system_simple(sys);

    // xi(0) = per-block norms of x0; upsilon(t) = per-block norms of u(t).
    Vector xi0(n);
    for (int i = 0; i < n; ++i) xi0(i) = x0.segment(ap.offset(i), ap.size(i)).norm();
    const bool driven = static_cast<bool>(input) && ni > 0;
    InputSignal upsilon;
    if (driven) {
        upsilon = [&sys, input, ip, ni](double t) {
            Vector u = input(t);
            if (u.size() != sys.B.cols()) {
                throw std::invalid_argument("comparison_trajectory_bound: input dimension mismatch");
            }
            Vector v(ni);
            for (int l = 0; l < ni; ++l) v(l) = u.segment(ip.offset(l), ip.size(l)).norm();
            return v;
        };
    }

    Trajectory orig = simulate_lti(sys.A, sys.B, x0, input, step, horizon);
    Trajectory comp = simulate_lti(ps.F, ps.G, xi0, upsilon, step, horizon);

    const auto samples = orig.times.size();
    BoundedTrajectoryReport out;
    out.times = orig.times;
    out.state_block_norms.resize(static_cast<Eigen::Index>(samples), n);
    out.comparison_states.resize(static_cast<Eigen::Index>(samples), n);
    out.output_norms.resize(static_cast<Eigen::Index>(samples), no);
    out.comparison_outputs.resize(static_cast<Eigen::Index>(samples), no);
    out.max_violation = -std::numeric_limits<double>::infinity();

    for (size_t s = 0; s < samples; ++s) {
        const Vector& x = orig.states[s];
        const Vector& xi = comp.states[s];
        double t = orig.times[s];
        Vector u = driven ? input(t) : Vector::Zero(sys.B.cols());
        Vector ups = driven ? upsilon(t) : Vector::Zero(ni);
        Vector y = sys.C * x + sys.D * u;
        Vector nu = ps.H * xi + ps.J * ups;
        for (int i = 0; i < n; ++i) {
            double norm = x.segment(ap.offset(i), ap.size(i)).norm();
            out.state_block_norms(static_cast<Eigen::Index>(s), i) = norm;
            out.comparison_states(static_cast<Eigen::Index>(s), i) = xi(i);
            out.max_violation = std::max(out.max_violation, norm - xi(i));
        }
        for (int k = 0; k < no; ++k) {
            double norm = y.segment(op.offset(k), op.size(k)).norm();
            out.output_norms(static_cast<Eigen::Index>(s), k) = norm;
            out.comparison_outputs(static_cast<Eigen::Index>(s), k) = nu(k);
            out.max_violation = std::max(out.max_violation, norm - nu(k));
        }
    }
    if (samples == 0) out.max_violation = 0.0;
    return out;
}

SeparableLyapunovValues separable_lyapunov_values(const Matrix& A, const Partition& partition,
                                                  const Vector& d, const Vector& e,
                                                  const Vector& x) {
    const int n = partition.count();
    if (A.rows() != partition.total() || x.size() != A.rows() || d.size() != n || e.size() != n) {
        throw std::invalid_argument("separable_lyapunov_values: dimension mismatch");
    }
    Matrix F = comparison_matrix(A, partition, ComparisonVariant::N_ALPHA);
    if (!is_hurwitz(F, kHurwitzGuard)) {
        throw std::invalid_argument("separable_lyapunov_values: N^a(A) is not Hurwitz");
    }
    if (n > 0 && (d.minCoeff() <= 0.0 || e.minCoeff() <= 0.0)) {
        throw std::invalid_argument("separable_lyapunov_values: d, e must be positive");
    }
    Vector Fd = -(F * d), Fte = -(F.transpose() * e);
    if (n > 0 && (Fd.minCoeff() <= 0.0 || Fte.minCoeff() <= 0.0)) {
        throw std::invalid_argument("separable_lyapunov_values: need -F d > 0 and -F^T e > 0");
    }

    SeparableLyapunovValues v;
    for (int i = 0; i < n; ++i) {
        double norm = x.segment(partition.offset(i), partition.size(i)).norm();
        v.V_max = std::max(v.V_max, norm / d(i));
        v.V_sum += e(i) * norm;
        v.V_diag += e(i) / d(i) * norm * norm;
    }
    return v;
}

}  // namespace blockcert
