#pragma once

#include <Eigen/Dense>
#include <string>

namespace lcr {

// Units: hbar = c = 1. Momenta live on the dual torus k_j = 2*pi*j/(n*dx).
enum class Dispersion {
  // omega_k^2 = m^2 + (2/dx)^2 sin^2(k dx / 2); group velocity <= 1.
  Lattice,
  // omega_k^2 = m^2 + k^2 with k folded to the first Brillouin zone.
  ContinuumSampled,
};

std::string to_string(Dispersion d);
Dispersion dispersion_from_string(const std::string& s);

struct LatticeSpec {
  int n_sites = 1;
  double spacing = 1.0;
  double mass = 1.0;
  Dispersion dispersion = Dispersion::Lattice;

  // Throws std::invalid_argument on n_sites < 1, spacing <= 0 or mass < 0.
  void validate() const;

  bool operator==(const LatticeSpec&) const = default;
};

// Wavenumber of mode j folded to (-pi/dx, pi/dx].
double mode_wavenumber(const LatticeSpec& spec, int mode_index);

// On-shell frequency omega_j >= mass; omega_j = omega_{n-j}.
double dispersion_omega(const LatticeSpec& spec, int mode_index);

// All n frequencies at once.
Eigen::VectorXd mode_frequencies(const LatticeSpec& spec);

// n x n real symmetric matrix acting as multiplication by f(omega_j) in
// mode space (a circulant). This is the plain-matrix convention: no
// lattice-measure factor is included.
Eigen::MatrixXd mode_operator(const LatticeSpec& spec,
                              const Eigen::VectorXd& mode_values);

// Spatial quadratic form of the Hamiltonian: mode multiplier omega_j^2.
// For the lattice dispersion this equals (-laplacian + m^2) with the
// standard periodic three-point laplacian.
Eigen::MatrixXd quadratic_form_matrix(const LatticeSpec& spec);

// Minimal-image distance |x_r - x_s| on the periodic lattice, in length units.
double min_image_distance(const LatticeSpec& spec, int r, int s);

}  // namespace lcr
