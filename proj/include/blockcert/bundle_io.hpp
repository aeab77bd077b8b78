#pragma once

#include <optional>
#include <string>

#include "blockcert/certify.hpp"
#include "blockcert/network.hpp"
#include "blockcert/partition.hpp"

namespace blockcert {

/// On-disk system description ("format": "blockcert/1"): matrices as
/// row-major nested arrays, partitions as arrays of positive integers,
/// D omitted means zero.
struct SystemBundle {
    PartitionedSystem system;
    std::string name;
    std::string description;
};

SystemBundle load_system_bundle(const std::string& path);
std::string system_bundle_to_json(const SystemBundle& bundle);
void save_system_bundle(const SystemBundle& bundle, const std::string& path);

struct NetworkBundle {
    NetworkModel network;
    std::string name;
    std::string description;
};

NetworkBundle load_network_bundle(const std::string& path);

/// Machine-readable certificate output.
struct CertificateDocument {
    std::string verdict;  // certified | inconclusive | rejected
    int exit_code = 1;    // 0 certified, 2 inconclusive, 1 error
    std::string json;
    std::string text;
};

CertificateDocument render_certificate(const BlockDiagonalCertificate& cert);
CertificateDocument render_certificate(const NetworkCertificate& cert);

/// Matrix Market reader (array and coordinate, real, general).
Matrix load_matrix_market(const std::string& path);

}  // namespace blockcert
