#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "blockcert/bundle_io.hpp"
#include "blockcert/comparison.hpp"
#include "blockcert/flow_bounds.hpp"
#include "blockcert/linalg.hpp"
#include "blockcert/stability_tests.hpp"

namespace {

using namespace blockcert;

void print_matrix(std::ostream& os, const Matrix& M) {
    os << std::setprecision(17);
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            os << (c ? " " : "") << M(r, c);
        }
        os << "\n";
    }
}

std::string json_matrix(const Matrix& M) {
    std::ostringstream os;
    os << std::setprecision(17) << "[";
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        os << (r ? "," : "") << "[";
        for (Eigen::Index c = 0; c < M.cols(); ++c) os << (c ? "," : "") << M(r, c);
        os << "]";
    }
    os << "]";
    return os.str();
}

SampledSignal load_input_file(const std::string& path, int expected_dim) {
    // CSV rows: t, u_1, ..., u_m
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
    SampledSignal sig;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        for (char& ch : line) {
            if (ch == ',' || ch == ';') ch = ' ';
        }
        std::istringstream row(line);
        double t;
        if (!(row >> t)) throw std::invalid_argument("bad input row: '" + line + "'");
        Vector u(expected_dim);
        for (int i = 0; i < expected_dim; ++i) {
            if (!(row >> u(i))) {
                throw std::invalid_argument("input row has fewer than " +
                                            std::to_string(expected_dim) + " channels: '" + line + "'");
            }
        }
        if (!sig.times.empty() && t <= sig.times.back()) {
            throw std::invalid_argument("input times must be strictly increasing");
        }
        sig.times.push_back(t);
        sig.values.push_back(u);
    }
    if (sig.times.empty()) throw std::invalid_argument("input file '" + path + "' is empty");
    return sig;
}

int cmd_certify(const std::string& path, std::optional<double> delta, double tol, bool json_out) {
    SystemBundle bundle = load_system_bundle(path);
    ValidationReport rep = validate(bundle.system);
    if (!rep.dimensions_ok || !rep.all_diagonal_blocks_hurwitz) {
        std::cerr << "error: " << rep.message << "\n";
        return 1;
    }
    CertifyOptions opts;
    opts.hinf_tol = tol;
    BlockDiagonalCertificate cert = certify_hinf(bundle.system, delta, opts);
    CertificateDocument doc = render_certificate(cert);
    std::cout << (json_out ? doc.json : doc.text);
    return doc.exit_code;
}

int cmd_norm(const std::string& path, double tol, bool json_out) {
    SystemBundle bundle = load_system_bundle(path);
    double norm =
        hinf_norm(bundle.system.A, bundle.system.B, bundle.system.C, bundle.system.D, tol);
    if (json_out) {
        std::cout << std::setprecision(17) << "{\"format\":\"blockcert/1\",\"hinf_norm\":" << norm
                  << "}\n";
    } else {
        std::cout << std::setprecision(17) << norm << "\n";
    }
    return 0;
}

int cmd_compare(const std::string& path, const std::string& variant, bool json_out) {
    SystemBundle bundle = load_system_bundle(path);
    ComparisonVariant v;
    if (variant == "M") {
        v = ComparisonVariant::M_ALPHA;
    } else if (variant == "Mtilde") {
        v = ComparisonVariant::MTILDE_ALPHA;
    } else if (variant == "N") {
        v = ComparisonVariant::N_ALPHA;
    } else {
        std::cerr << "error: unknown variant '" << variant << "' (use M, Mtilde or N)\n";
        return 1;
    }
    Matrix F = comparison_matrix(bundle.system.A, bundle.system.state_partition, v);
    bool hurwitz = is_hurwitz(F, kHurwitzGuard);
    if (json_out) {
        std::cout << "{\"format\":\"blockcert/1\",\"variant\":\"" << variant << "\",\"F\":"
                  << json_matrix(F) << ",\"hurwitz\":" << (hurwitz ? "true" : "false") << "}\n";
    } else {
        std::cout << "variant: " << variant << "\nhurwitz: " << (hurwitz ? "true" : "false")
                  << "\nF:\n";
        print_matrix(std::cout, F);
    }
    return 0;
}

int cmd_tests(const std::string& path, double epsilon, bool json_out) {
    SystemBundle bundle = load_system_bundle(path);
    AllTestsReport all =
        run_all_tests(bundle.system.A, bundle.system.state_partition, epsilon);
    const char* names[] = {"I", "II", "III", "IV"};
    if (json_out) {
        std::ostringstream os;
        os << "{\"format\":\"blockcert/1\",\"tests\":[";
        for (size_t i = 0; i < all.reports.size(); ++i) {
            const auto& r = all.reports[i];
            os << (i ? "," : "") << "{\"test\":\"" << names[i] << "\",\"hurwitz\":"
               << (r.hurwitz ? "true" : "false") << ",\"epsilon\":" << std::setprecision(17)
               << r.epsilon_used << ",\"epsilon_sensitive\":"
               << (r.epsilon_sensitive ? "true" : "false") << "}";
        }
        os << "],\"certificate\":"
           << (all.certificate && all.certificate->certified() ? "true" : "false") << "}\n";
        std::cout << os.str();
    } else {
        for (size_t i = 0; i < all.reports.size(); ++i) {
            const auto& r = all.reports[i];
            std::cout << "Test " << names[i] << ": " << (r.hurwitz ? "pass" : "fail");
            if (r.epsilon_sensitive) std::cout << "  (epsilon-sensitive)";
            std::cout << "\n";
        }
        if (all.certificate && all.certificate->certified()) {
            std::cout << "block-diagonal Lyapunov certificate: verified (residual "
                      << all.certificate->lyapunov_residual << ")\n";
        } else {
            std::cout << "block-diagonal Lyapunov certificate: none\n";
        }
    }
    return 0;
}

int cmd_simulate(const std::string& path, const std::string& x0_arg, double horizon, double step,
                 const std::string& input_path, bool json_out) {
    SystemBundle bundle = load_system_bundle(path);
    const auto N = bundle.system.A.rows();
    Vector x0 = Vector::Zero(N);
    if (!x0_arg.empty()) {
        std::string arg = x0_arg;
        for (char& ch : arg) {
            if (ch == ',') ch = ' ';
        }
        std::istringstream is(arg);
        for (Eigen::Index i = 0; i < N; ++i) {
            if (!(is >> x0(i))) {
                std::cerr << "error: --x0 needs " << N << " comma-separated values\n";
                return 1;
            }
        }
    }
    InputSignal input;
    SampledSignal sig;
    if (!input_path.empty()) {
        sig = load_input_file(input_path, static_cast<int>(bundle.system.B.cols()));
        input = [&sig](double t) { return sig.at(t); };
    }
    BoundedTrajectoryReport rep =
        comparison_trajectory_bound(bundle.system, x0, input, horizon, step);

    std::ostream& os = std::cout;
    if (json_out) {
        os << std::setprecision(17) << "{\"format\":\"blockcert/1\",\"max_violation\":"
           << rep.max_violation << ",\"samples\":" << rep.times.size() << "}\n";
    } else {
        // CSV: t, per-block ||x_i||, xi_i, per-output ||y_k||, nu_k
        os << "t";
        for (int i = 0; i < rep.state_block_norms.cols(); ++i)
            os << ",x" << (i + 1) << "_norm,xi" << (i + 1);
        for (int k = 0; k < rep.output_norms.cols(); ++k)
            os << ",y" << (k + 1) << "_norm,nu" << (k + 1);
        os << "\n" << std::setprecision(17);
        for (size_t s = 0; s < rep.times.size(); ++s) {
            os << rep.times[s];
            for (int i = 0; i < rep.state_block_norms.cols(); ++i) {
                os << "," << rep.state_block_norms(static_cast<Eigen::Index>(s), i) << ","
                   << rep.comparison_states(static_cast<Eigen::Index>(s), i);
            }
            for (int k = 0; k < rep.output_norms.cols(); ++k) {
                os << "," << rep.output_norms(static_cast<Eigen::Index>(s), k) << ","
                   << rep.comparison_outputs(static_cast<Eigen::Index>(s), k);
            }
            os << "\n";
        }
    }
    return 0;
}

int cmd_network(const std::string& path, std::optional<double> delta, bool decoupled,
                bool json_out) {
    NetworkBundle bundle = load_network_bundle(path);
    if (decoupled) {
        PositiveSystem ps = network_comparison_decoupled(bundle.network);
        bool hurwitz = is_hurwitz(ps.F, kHurwitzGuard);
        double norm = hurwitz ? positive_hinf_norm(ps) : 0.0;
        if (json_out) {
            std::cout << std::setprecision(17) << "{\"format\":\"blockcert/1\",\"F\":"
                      << json_matrix(ps.F) << ",\"hurwitz\":" << (hurwitz ? "true" : "false")
                      << ",\"comparison_norm\":" << norm << "}\n";
        } else {
            std::cout << "decoupled comparison matrix:\n";
            print_matrix(std::cout, ps.F);
            std::cout << "hurwitz: " << (hurwitz ? "true" : "false") << "\n";
            if (hurwitz) std::cout << "comparison norm: " << norm << "\n";
        }
        return hurwitz ? 0 : 2;
    }
    NetworkCertificate cert = network_hinf_certificate(bundle.network, delta);
    CertificateDocument doc = render_certificate(cert);
    std::cout << (json_out ? doc.json : doc.text);
    return doc.exit_code;
}

int cmd_convert_mm(const std::string& a, const std::string& b, const std::string& c,
                   const std::string& d, const std::string& sp, const std::string& ip,
                   const std::string& op, const std::string& out) {
    auto parse_partition = [](const std::string& arg, const char* name) {
        std::string s = arg;
        for (char& ch : s) {
            if (ch == ',') ch = ' ';
        }
        std::istringstream is(s);
        std::vector<int> sizes;
        int k;
        while (is >> k) sizes.push_back(k);
        if (sizes.empty()) {
            throw std::invalid_argument(std::string("--") + name + " needs comma-separated sizes");
        }
        return Partition(sizes);
    };
    SystemBundle bundle;
    bundle.system.A = load_matrix_market(a);
    bundle.system.B = load_matrix_market(b);
    bundle.system.C = load_matrix_market(c);
    bundle.system.D = d.empty() ? Matrix::Zero(bundle.system.C.rows(), bundle.system.B.cols())
                                : load_matrix_market(d);
    bundle.system.state_partition = parse_partition(sp, "state-partition");
    bundle.system.input_partition = parse_partition(ip, "input-partition");
    bundle.system.output_partition = parse_partition(op, "output-partition");
    ValidationReport rep = validate(bundle.system);
    if (!rep.dimensions_ok) throw std::invalid_argument(rep.message);
    save_system_bundle(bundle, out);
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blockcert: block-diagonal Lyapunov/Riccati certificates via positive comparison systems"};
    app.require_subcommand(1);

    std::string bundle_path, variant = "M", x0_arg, input_path;
    std::string mm_a, mm_b, mm_c, mm_d, mm_sp, mm_ip, mm_op, mm_out = "bundle.json";
    double tol = 1e-8, epsilon = 0.0, horizon = 1.0, step = 1e-3;
    std::optional<double> delta;
    bool json_out = false, text_out = false, decoupled = false;

    auto add_io_flags = [&](CLI::App* cmd) {
        cmd->add_flag("--json", json_out, "machine-readable JSON output");
        cmd->add_flag("--text", text_out, "human-readable text output (default)");
    };

    auto* certify = app.add_subcommand("certify", "block-diagonal H-infinity certificate");
    certify->add_option("bundle", bundle_path, "system bundle (JSON)")->required();
    certify->add_option("--delta", delta, "performance level (default 1.001 x comparison norm)");
    certify->add_option("--tolerance", tol, "relative H-infinity tolerance");
    add_io_flags(certify);

    auto* norm = app.add_subcommand("norm", "H-infinity norm of the bundle system");
    norm->add_option("bundle", bundle_path)->required();
    norm->add_option("--tolerance", tol);
    add_io_flags(norm);

    auto* compare = app.add_subcommand("compare", "comparison matrix and Hurwitz verdict");
    compare->add_option("bundle", bundle_path)->required();
    compare->add_option("--variant", variant, "M | Mtilde | N");
    add_io_flags(compare);

    auto* tests = app.add_subcommand("tests", "distributed stability tests I-IV");
    tests->add_option("bundle", bundle_path)->required();
    tests->add_option("--epsilon", epsilon, "diagonal margin (default relative 1e-6)");
    add_io_flags(tests);

    auto* simulate = app.add_subcommand("simulate", "flow bounds against the comparison system");
    simulate->add_option("bundle", bundle_path)->required();
    simulate->add_option("--x0", x0_arg, "initial state, comma separated (default 0)");
    simulate->add_option("--horizon", horizon, "simulation horizon");
    simulate->add_option("--step", step, "RK4 step");
    simulate->add_option("--input", input_path, "sampled input CSV: t,u1,...,um");
    add_io_flags(simulate);

    auto* network = app.add_subcommand("network", "certificate for a feedback interconnection");
    network->add_option("bundle", bundle_path, "network bundle (JSON)")->required();
    network->add_option("--delta", delta);
    network->add_flag("--decoupled", decoupled, "report the decoupled comparison system instead");
    add_io_flags(network);

    auto* convert = app.add_subcommand("convert-mm", "MatrixMarket (A,B,C,D) quadruple to bundle");
    convert->add_option("--a", mm_a)->required();
    convert->add_option("--b", mm_b)->required();
    convert->add_option("--c", mm_c)->required();
    convert->add_option("--d", mm_d);
    convert->add_option("--state-partition", mm_sp)->required();
    convert->add_option("--input-partition", mm_ip)->required();
    convert->add_option("--output-partition", mm_op)->required();
    convert->add_option("-o,--output", mm_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (certify->parsed()) return cmd_certify(bundle_path, delta, tol, json_out);
        if (norm->parsed()) return cmd_norm(bundle_path, tol, json_out);
        if (compare->parsed()) return cmd_compare(bundle_path, variant, json_out);
        if (tests->parsed()) return cmd_tests(bundle_path, epsilon, json_out);
        if (simulate->parsed())
            return cmd_simulate(bundle_path, x0_arg, horizon, step, input_path, json_out);
        if (network->parsed()) return cmd_network(bundle_path, delta, decoupled, json_out);
        if (convert->parsed())
            return cmd_convert_mm(mm_a, mm_b, mm_c, mm_d, mm_sp, mm_ip, mm_op, mm_out);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
