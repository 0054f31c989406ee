#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>

#include "lcr/gaussian.hpp"
#include "lcr/superposition.hpp"

namespace lcr {

// Wire schemas. Round-trips are exact for doubles (shortest-repr printing),
// comfortably inside the 1e-12 contract.
nlohmann::json to_json(const LatticeSpec& spec);
LatticeSpec lattice_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Region& region);
Region region_from_json(const nlohmann::json& j);

// {spec, mean, covariance} with the covariance flattened row-major.
nlohmann::json to_json(const GaussianState& state);
GaussianState gaussian_state_from_json(const nlohmann::json& j);

// {region, mean_block, cov_block}.
nlohmann::json to_json(const ReducedDescriptor& descriptor);
ReducedDescriptor reduced_descriptor_from_json(const nlohmann::json& j);

// {spec, branches: [{re, im, phi_class, pi_class}]}.
nlohmann::json to_json(const CoherentSuperposition& sup);
CoherentSuperposition superposition_from_json(const nlohmann::json& j);

// Complex matrices as nested arrays of [re, im] pairs.
nlohmann::json complex_matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complex_matrix_from_json(const nlohmann::json& j);

// Rejects keys outside `allowed`; the strict half of config validation.
void require_keys(const nlohmann::json& j,
                  std::initializer_list<const char*> allowed,
                  const std::string& context);

// Write-to-temp then rename, so readers never see partial files.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

// FNV-1a 64-bit, hex-encoded; used for run-manifest config hashes.
std::string fnv1a_hex(const std::string& payload);

}  // namespace lcr
