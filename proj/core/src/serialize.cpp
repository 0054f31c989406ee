#include "lcr/serialize.hpp"

#include <cstdint>
#include <fstream>
#include <random>

#include "lcr/errors.hpp"

namespace lcr {

using nlohmann::json;

json to_json(const LatticeSpec& spec) {
  return json{{"n_sites", spec.n_sites},
              {"spacing", spec.spacing},
              {"mass", spec.mass},
              {"dispersion", to_string(spec.dispersion)}};
}

LatticeSpec lattice_spec_from_json(const json& j) {
  require_keys(j, {"n_sites", "spacing", "mass", "dispersion"}, "spec");
  LatticeSpec spec;
  spec.n_sites = j.at("n_sites").get<int>();
  spec.spacing = j.at("spacing").get<double>();
  spec.mass = j.at("mass").get<double>();
  spec.dispersion = dispersion_from_string(j.at("dispersion").get<std::string>());
  spec.validate();
  return spec;
}

json to_json(const Region& region) { return json(region.sites()); }

Region region_from_json(const json& j) {
  return Region(j.get<std::vector<int>>());
}

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(data.data(), data.size());
}

json matrix_to_json_rowmajor(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(m.size());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return json(flat);
}

Eigen::MatrixXd matrix_from_json_rowmajor(const json& j, int rows, int cols) {
  const auto flat = j.get<std::vector<double>>();
  if (static_cast<int>(flat.size()) != rows * cols)
    throw ConfigError("matrix payload has wrong length");
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
  return m;
}

}  // namespace

json to_json(const GaussianState& state) {
  return json{{"spec", to_json(state.spec)},
              {"mean", vector_to_json(state.mean)},
              {"covariance", matrix_to_json_rowmajor(state.covariance)}};
}

GaussianState gaussian_state_from_json(const json& j) {
  require_keys(j, {"spec", "mean", "covariance"}, "gaussian state");
  GaussianState state;
  state.spec = lattice_spec_from_json(j.at("spec"));
  state.mean = vector_from_json(j.at("mean"));
  const int dim = 2 * state.spec.n_sites;
  if (state.mean.size() != dim)
    throw ConfigError("mean length != 2 n_sites");
  state.covariance = matrix_from_json_rowmajor(j.at("covariance"), dim, dim);
  return state;
}

json to_json(const ReducedDescriptor& descriptor) {
  return json{{"region", to_json(descriptor.region)},
              {"mean_block", vector_to_json(descriptor.mean_block)},
              {"cov_block", matrix_to_json_rowmajor(descriptor.cov_block)}};
}

ReducedDescriptor reduced_descriptor_from_json(const json& j) {
  require_keys(j, {"region", "mean_block", "cov_block"}, "descriptor");
  ReducedDescriptor d;
  d.region = region_from_json(j.at("region"));
  d.mean_block = vector_from_json(j.at("mean_block"));
  const int dim = static_cast<int>(d.mean_block.size());
  d.cov_block = matrix_from_json_rowmajor(j.at("cov_block"), dim, dim);
  return d;
}

json to_json(const CoherentSuperposition& sup) {
  json branches = json::array();
  for (const auto& b : sup.branches)
    branches.push_back(json{{"re", b.amplitude.real()},
                            {"im", b.amplitude.imag()},
                            {"phi_class", vector_to_json(b.phi_class)},
                            {"pi_class", vector_to_json(b.pi_class)}});
  return json{{"spec", to_json(sup.spec)}, {"branches", branches}};
}

CoherentSuperposition superposition_from_json(const json& j) {
  require_keys(j, {"spec", "branches"}, "superposition");
  const LatticeSpec spec = lattice_spec_from_json(j.at("spec"));
  std::vector<CoherentBranch> branches;
  for (const auto& bj : j.at("branches")) {
    require_keys(bj, {"re", "im", "phi_class", "pi_class"}, "branch");
    CoherentBranch b;
    b.amplitude = {bj.at("re").get<double>(), bj.at("im").get<double>()};
    b.phi_class = vector_from_json(bj.at("phi_class"));
    b.pi_class = vector_from_json(bj.at("pi_class"));
    branches.push_back(std::move(b));
  }
  return CoherentSuperposition::make(spec, std::move(branches));
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array())
    throw ConfigError("complex matrix must be a non-empty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j[r].size()) != cols)
      throw ConfigError("ragged complex matrix");
    for (int c = 0; c < cols; ++c) {
      const auto& cell = j[r][c];
      if (!cell.is_array() || cell.size() != 2)
        throw ConfigError("complex entries are [re, im] pairs");
      m(r, c) = {cell[0].get<double>(), cell[1].get<double>()};
    }
  }
  return m;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) throw ConfigError(context + ": unknown key '" + key + "'");
  }
}

void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  const auto tmp = path.parent_path() /
                   (path.filename().string() + ".tmp" + std::to_string(rd()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string fnv1a_hex(const std::string& payload) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : payload) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buf);
}

}  // namespace lcr
