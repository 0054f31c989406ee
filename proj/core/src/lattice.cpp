#include "lcr/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lcr/errors.hpp"

namespace lcr {

std::string to_string(Dispersion d) {
  return d == Dispersion::Lattice ? "lattice" : "continuum-sampled";
}

Dispersion dispersion_from_string(const std::string& s) {
  if (s == "lattice") return Dispersion::Lattice;
  if (s == "continuum-sampled" || s == "continuum_sampled")
    return Dispersion::ContinuumSampled;
  throw std::invalid_argument("unknown dispersion: " + s);
}

void LatticeSpec::validate() const {
  if (n_sites < 1) throw std::invalid_argument("n_sites must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
  if (!(mass >= 0.0)) throw std::invalid_argument("mass must be >= 0");
}

double mode_wavenumber(const LatticeSpec& spec, int mode_index) {
  if (mode_index < 0 || mode_index >= spec.n_sites)
    throw std::invalid_argument("mode_index out of range");
  // fold j to the symmetric zone so that k_j and k_{n-j} have equal |k|
  const int n = spec.n_sites;
  const int j = mode_index <= n / 2 ? mode_index : mode_index - n;
  return 2.0 * std::numbers::pi * j / (n * spec.spacing);
}

double dispersion_omega(const LatticeSpec& spec, int mode_index) {
  const double k = mode_wavenumber(spec, mode_index);
  switch (spec.dispersion) {
    case Dispersion::Lattice: {
      const double s = std::sin(0.5 * k * spec.spacing);
      const double kin = (2.0 / spec.spacing) * s;
      return std::hypot(spec.mass, kin);
    }
    case Dispersion::ContinuumSampled:
      return std::hypot(spec.mass, k);
  }
  throw std::logic_error("unreachable");
}

Eigen::VectorXd mode_frequencies(const LatticeSpec& spec) {
  spec.validate();
  Eigen::VectorXd w(spec.n_sites);
  for (int j = 0; j < spec.n_sites; ++j) w[j] = dispersion_omega(spec, j);
  return w;
}

Eigen::MatrixXd mode_operator(const LatticeSpec& spec,
                              const Eigen::VectorXd& mode_values) {
  const int n = spec.n_sites;
  if (mode_values.size() != n)
    throw std::invalid_argument("mode_operator: need one value per mode");
  // first row of the circulant; imaginary parts cancel by f_j = f_{n-j}
  Eigen::VectorXd first(n);
  for (int r = 0; r < n; ++r) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += mode_values[j] *
             std::cos(2.0 * std::numbers::pi * j * r / static_cast<double>(n));
    first[r] = acc / n;
  }
  Eigen::MatrixXd out(n, n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) out(r, s) = first[(r - s + n) % n];
  return out;
}

Eigen::MatrixXd quadratic_form_matrix(const LatticeSpec& spec) {
  return mode_operator(spec, mode_frequencies(spec).array().square());
}

double min_image_distance(const LatticeSpec& spec, int r, int s) {
  const int n = spec.n_sites;
  int d = std::abs(r - s) % n;
  d = std::min(d, n - d);
  return d * spec.spacing;
}

}  // namespace lcr
