#include "blockcert/bundle_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace blockcert {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "blockcert/1";

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw std::invalid_argument("field '" + field + "' must be an array of rows");
    const auto rows = j.size();
    if (rows == 0) return Matrix(0, 0);
    size_t cols = 0;
    Matrix M;
    for (size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        if (!row.is_array()) {
            throw std::invalid_argument("field '" + field + "' row " + std::to_string(r + 1) +
                                        " is not an array");
        }
        if (r == 0) {
            cols = row.size();
            M.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            throw std::invalid_argument("field '" + field + "' row " + std::to_string(r + 1) +
                                        " has " + std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(cols));
        }
        for (size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                throw std::invalid_argument("field '" + field + "' entry (" + std::to_string(r + 1) +
                                            "," + std::to_string(c + 1) + ") is not a number");
            }
            double v = row[c].get<double>();
            if (!std::isfinite(v)) {
                throw std::invalid_argument("field '" + field + "' entry (" + std::to_string(r + 1) +
                                            "," + std::to_string(c + 1) + ") is not finite");
            }
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return M;
}

json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Partition partition_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw std::invalid_argument("field '" + field + "' must be an integer array");
    std::vector<int> sizes;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<int>() < 1) {
            throw std::invalid_argument("field '" + field + "' entries must be positive integers");
        }
        sizes.push_back(v.get<int>());
    }
    return Partition(sizes);
}

json partition_to_json(const Partition& p) {
    json arr = json::array();
    for (int k : p.sizes) arr.push_back(k);
    return arr;
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + ex.what());
    }
    if (!j.is_object()) throw std::invalid_argument("'" + path + "': top level must be an object");
    if (j.value("format", std::string()) != kFormatTag) {
        throw std::invalid_argument("'" + path + "': missing or unsupported \"format\" " +
                                    "(expected \"" + kFormatTag + "\")");
    }
    return j;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

SystemBundle load_system_bundle(const std::string& path) {
    json j = parse_file(path);
    SystemBundle b;
    b.name = j.value("name", std::string());
    b.description = j.value("description", std::string());
    for (const char* field : {"A", "B", "C", "state_partition", "input_partition",
                              "output_partition"}) {
        if (!j.contains(field)) {
            throw std::invalid_argument("'" + path + "': missing field '" + field + "'");
        }
    }
    b.system.A = matrix_from_json(j["A"], "A");
    b.system.B = matrix_from_json(j["B"], "B");
    b.system.C = matrix_from_json(j["C"], "C");
    b.system.state_partition = partition_from_json(j["state_partition"], "state_partition");
    b.system.input_partition = partition_from_json(j["input_partition"], "input_partition");
    b.system.output_partition = partition_from_json(j["output_partition"], "output_partition");
    if (j.contains("D")) {
        b.system.D = matrix_from_json(j["D"], "D");
    } else {
        b.system.D = Matrix::Zero(b.system.C.rows(), b.system.B.cols());
    }
    ValidationReport rep = validate(b.system);
    if (!rep.dimensions_ok) throw std::invalid_argument("'" + path + "': " + rep.message);
    return b;
}

std::string system_bundle_to_json(const SystemBundle& b) {
    json j;
    j["format"] = kFormatTag;
    if (!b.name.empty()) j["name"] = b.name;
    if (!b.description.empty()) j["description"] = b.description;
    j["A"] = matrix_to_json(b.system.A);
    j["B"] = matrix_to_json(b.system.B);
    j["C"] = matrix_to_json(b.system.C);
    j["D"] = matrix_to_json(b.system.D);
    j["state_partition"] = partition_to_json(b.system.state_partition);
    j["input_partition"] = partition_to_json(b.system.input_partition);
    j["output_partition"] = partition_to_json(b.system.output_partition);
    return j.dump(2) + "\n";
}

void save_system_bundle(const SystemBundle& bundle, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out << system_bundle_to_json(bundle);
}

NetworkBundle load_network_bundle(const std::string& path) {
    json j = parse_file(path);
    NetworkBundle b;
    b.name = j.value("name", std::string());
    b.description = j.value("description", std::string());
    if (!j.contains("subsystems") || !j["subsystems"].is_array() || j["subsystems"].empty()) {
        throw std::invalid_argument("'" + path + "': missing or empty 'subsystems' array");
    }
    for (size_t i = 0; i < j["subsystems"].size(); ++i) {
        const json& js = j["subsystems"][i];
        Subsystem sub;
        std::string tag = "subsystems[" + std::to_string(i + 1) + "]";
        for (const char* field : {"A", "B", "C"}) {
            if (!js.contains(field)) {
                throw std::invalid_argument("'" + path + "': " + tag + " missing '" + field + "'");
            }
        }
        sub.A = matrix_from_json(js["A"], tag + ".A");
        sub.B = matrix_from_json(js["B"], tag + ".B");
        sub.C = matrix_from_json(js["C"], tag + ".C");
        b.network.subsystems.push_back(std::move(sub));
    }
    for (const char* field : {"M", "K", "N", "input_partition", "output_partition"}) {
        if (!j.contains(field)) {
            throw std::invalid_argument("'" + path + "': missing field '" + field + "'");
        }
    }
    b.network.M = matrix_from_json(j["M"], "M");
    b.network.K = matrix_from_json(j["K"], "K");
    b.network.N = matrix_from_json(j["N"], "N");
    b.network.external_input_partition = partition_from_json(j["input_partition"], "input_partition");
    b.network.external_output_partition =
        partition_from_json(j["output_partition"], "output_partition");
    b.network.check();
    return b;
}

namespace {

const char* verdict_of(CertifyStatus status) {
    switch (status) {
        case CertifyStatus::Certified:
            return "certified";
        case CertifyStatus::ComparisonUnstable:
            return "inconclusive";
        default:
            return "rejected";
    }
}

int exit_code_of(CertifyStatus status) {
    switch (status) {
        case CertifyStatus::Certified:
            return 0;
        case CertifyStatus::ComparisonUnstable:
            return 2;
        default:
            return 1;
    }
}

}  // namespace

CertificateDocument render_certificate(const BlockDiagonalCertificate& cert) {
    CertificateDocument doc;
    doc.verdict = verdict_of(cert.status);
    doc.exit_code = exit_code_of(cert.status);

    json j;
    j["format"] = kFormatTag;
    j["verdict"] = doc.verdict;
    j["delta"] = cert.delta;
    j["comparison_norm"] = cert.comparison_norm;
    j["residuals"] = {{"lyapunov", cert.lyapunov_residual}, {"riccati", cert.riccati_residual}};
    j["min_block_eigenvalue"] = cert.min_block_eigenvalue;
    json blocks = json::array();
    for (const auto& blk : cert.blocks) blocks.push_back(matrix_to_json(blk));
    j["blocks"] = blocks;
    j["scalings"] = {{"d", vector_to_json(cert.scalings.d)},
                     {"e", vector_to_json(cert.scalings.e)},
                     {"g", vector_to_json(cert.scalings.g)},
                     {"f", vector_to_json(cert.scalings.f)}};
    j["timings"] = {{"comparison_s", cert.timings.comparison_s},
                    {"lp_s", cert.timings.lp_s},
                    {"riccati_s", cert.timings.riccati_s},
                    {"verify_s", cert.timings.verify_s},
                    {"total_s", cert.timings.total_s}};
    if (!cert.message.empty()) j["message"] = cert.message;
    doc.json = j.dump(2) + "\n";

    std::ostringstream text;
    text << "verdict:          " << doc.verdict << "\n";
    if (cert.certified()) {
        text << "delta:            " << cert.delta << "\n"
             << "comparison norm:  " << cert.comparison_norm << "\n"
             << "lyapunov resid:   " << cert.lyapunov_residual << "\n"
             << "riccati resid:    " << cert.riccati_residual << "\n"
             << "min block eig:    " << cert.min_block_eigenvalue << "\n"
             << "blocks:           " << cert.blocks.size() << "\n"
             << "stage times [s]:  comparison " << cert.timings.comparison_s << ", lp "
             << cert.timings.lp_s << ", riccati " << cert.timings.riccati_s << ", verify "
             << cert.timings.verify_s << ", total " << cert.timings.total_s << "\n";
    } else {
        text << "reason:           " << cert.message << "\n";
    }
    doc.text = text.str();
    return doc;
}

CertificateDocument render_certificate(const NetworkCertificate& cert) {
    CertificateDocument doc;
    doc.verdict = verdict_of(cert.status);
    doc.exit_code = exit_code_of(cert.status);

    json j;
    j["format"] = kFormatTag;
    j["verdict"] = doc.verdict;
    j["delta"] = cert.delta;
    j["comparison_norm"] = cert.comparison_norm;
    j["residuals"] = {{"lyapunov", cert.lyapunov_residual}, {"riccati", cert.riccati_residual}};
    j["min_block_eigenvalue"] = cert.min_block_eigenvalue;
    json blocks = json::array();
    for (const auto& blk : cert.blocks) blocks.push_back(matrix_to_json(blk));
    j["blocks"] = blocks;
    json y22 = json::array();
    for (const auto& y : cert.supply_Y22) y22.push_back(matrix_to_json(y));
    j["supply"] = {{"Y11", vector_to_json(cert.supply_Y11)}, {"Y22", y22}};
    j["scalings"] = {{"d", vector_to_json(cert.scalings.d)},
                     {"e", vector_to_json(cert.scalings.e)},
                     {"g", vector_to_json(cert.scalings.g)},
                     {"f", vector_to_json(cert.scalings.f)}};
    if (!cert.message.empty()) j["message"] = cert.message;
    doc.json = j.dump(2) + "\n";

    std::ostringstream text;
    text << "verdict:          " << doc.verdict << "\n";
    if (cert.certified()) {
        text << "delta:            " << cert.delta << "\n"
             << "comparison norm:  " << cert.comparison_norm << "\n"
             << "riccati resid:    " << cert.riccati_residual << "\n"
             << "subsystems:       " << cert.blocks.size() << "\n";
    } else {
        text << "reason:           " << cert.message << "\n";
    }
    doc.text = text.str();
    return doc;
}

Matrix load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header) || header.rfind("%%MatrixMarket", 0) != 0) {
        throw std::invalid_argument("'" + path + "': not a MatrixMarket file");
    }
    std::istringstream hs(header);
    std::string tag, object, mm_format, field, symmetry;
    hs >> tag >> object >> mm_format >> field >> symmetry;
    if (object != "matrix" || field != "real" || symmetry != "general" ||
        (mm_format != "array" && mm_format != "coordinate")) {
        throw std::invalid_argument("'" + path + "': only real general array/coordinate supported");
    }
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sizes(line);
    if (mm_format == "array") {
        Eigen::Index rows = 0, cols = 0;
        sizes >> rows >> cols;
        if (rows < 1 || cols < 1) throw std::invalid_argument("'" + path + "': bad dimensions");
        Matrix M(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c) {  // column-major per the format
            for (Eigen::Index r = 0; r < rows; ++r) {
                if (!(in >> M(r, c))) {
                    throw std::invalid_argument("'" + path + "': truncated array data");
                }
            }
        }
        return M;
    }
    Eigen::Index rows = 0, cols = 0;
    long nnz = 0;
    sizes >> rows >> cols >> nnz;
    if (rows < 1 || cols < 1 || nnz < 0) throw std::invalid_argument("'" + path + "': bad sizes");
    Matrix M = Matrix::Zero(rows, cols);
    for (long k = 0; k < nnz; ++k) {
        Eigen::Index r = 0, c = 0;
        double v = 0.0;
        if (!(in >> r >> c >> v) || r < 1 || r > rows || c < 1 || c > cols) {
            throw std::invalid_argument("'" + path + "': bad coordinate entry " +
                                        std::to_string(k + 1));
        }
        M(r - 1, c - 1) = v;
    }
    return M;
}

}  // namespace blockcert
