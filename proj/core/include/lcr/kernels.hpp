#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lcr/lattice.hpp"

namespace lcr {

// Translation-invariant kernels of the free-field boundary propagator,
// realized as real symmetric circulant matrices. Mode weights:
//
//   G        omega * cos(omega t) / sin(omega t)     (-> 1/t as omega -> 0)
//   g        omega / sin(omega t)                    (-> 1/t)
//   gInv     sin(omega t) / omega                    (-> t)
//   E        omega                                   (no time argument)
//   dG_dt    -omega^2 / sin^2(omega t)               (-> -1/t^2)
//   dgInv_dt cos(omega t)                            (-> 1)
//
// Matrix entries carry the lattice measure: entry(r,s) =
// (1/(n dx)) sum_j weight(omega_j) exp(i k_j (x_r - x_s)). A continuum
// convolution therefore discretizes as dx * (matrix product), and a delta
// function as (1/dx) * identity.
enum class KernelRole { G, g, gInv, E, dG_dt, dgInv_dt };

std::string to_string(KernelRole role);

struct KernelMatrix {
  KernelRole role;
  std::optional<double> time;  // absent for E
  Eigen::MatrixXd entries;
};

// Guard width around sin(omega t) = 0 below which G/g are rejected.
inline constexpr double kCausticEpsilon = 1e-6;

// Mode weight with the omega -> 0 limits above. Throws CausticError when
// |sin(omega t)| <= kCausticEpsilon for a singular role.
double kernel_mode_weight(KernelRole role, double omega, double t);

// Throws CausticError near caustics (roles G, g, dG_dt) and
// MasslessVacuumError for role E at mass = 0. `t` is ignored for E.
KernelMatrix build_kernel(const LatticeSpec& spec, KernelRole role,
                          double t = 0.0);

// Discretized residuals of the propagator-kernel identities. Time
// derivatives use centered differences of width dt, so residuals of the
// differentiated identities scale as O(dt^2).
//
//   gg          dx * gInv g = (1/dx) I
//   gG1         dx * gInv G = d/dt gInv
//   gG2         dx * (d/dt gInv) G = g + d^2/dt^2 gInv
//   GG_appendix dx * G G = -d/dt G + (laplacian - m^2 delta) kernel
enum class KernelIdentity { gg, gG1, gG2, GG_appendix };

std::string to_string(KernelIdentity id);
KernelIdentity kernel_identity_from_string(const std::string& s);

// Max-norm residual of the chosen identity.
double verify_identity(const LatticeSpec& spec, KernelIdentity which, double t,
                       double dt);

// |gInv(x;t)| against minimal-image distance, plus a least-squares
// exponential decay rate fitted to the spacelike tail. The fit uses
// entries outside |x| = t that sit above the numerical floor; when the
// cone tail is entirely below the floor (heavy masses on coarse
// lattices), it falls back to the resolvable flank outside the group
// cone v_max * t, which is the lattice's actual propagation front.
struct LightconeProfile {
  std::vector<double> distance;   // ascending, one entry per distance class
  std::vector<double> magnitude;  // |entry| at that distance
  double decay_rate;              // slope of log|entry| vs distance, < 0
  double fit_start;               // distance where the fitted tail begins
};

// Largest |d omega / d k| of the dispersion, sampled over the zone.
double max_group_velocity(const LatticeSpec& spec);

// Requires t > 0 and n*dx > 2*(t + margin); throws PeriodicWrapError.
LightconeProfile lightcone_profile(const LatticeSpec& spec, double t,
                                   double margin = 0.0);

}  // namespace lcr
