#include "lcr/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lcr/errors.hpp"

namespace lcr {

namespace {

constexpr double kZeroModeTol = 1e-12;

bool role_has_caustic(KernelRole role) {
  return role == KernelRole::G || role == KernelRole::g ||
         role == KernelRole::dG_dt;
}

}  // namespace

std::string to_string(KernelRole role) {
  switch (role) {
    case KernelRole::G: return "G";
    case KernelRole::g: return "g";
    case KernelRole::gInv: return "gInv";
    case KernelRole::E: return "E";
    case KernelRole::dG_dt: return "dG_dt";
    case KernelRole::dgInv_dt: return "dgInv_dt";
  }
  throw std::logic_error("unreachable");
}

std::string to_string(KernelIdentity id) {
  switch (id) {
    case KernelIdentity::gg: return "gg";
    case KernelIdentity::gG1: return "gG1";
    case KernelIdentity::gG2: return "gG2";
    case KernelIdentity::GG_appendix: return "GG_appendix";
  }
  throw std::logic_error("unreachable");
}

KernelIdentity kernel_identity_from_string(const std::string& s) {
  if (s == "gg") return KernelIdentity::gg;
  if (s == "gG1") return KernelIdentity::gG1;
  if (s == "gG2") return KernelIdentity::gG2;
  if (s == "GG_appendix") return KernelIdentity::GG_appendix;
  throw std::invalid_argument("unknown kernel identity: " + s);
}

double kernel_mode_weight(KernelRole role, double omega, double t) {
  if (role == KernelRole::E) return omega;

  if (omega <= kZeroModeTol) {
    // zero-mode limits; 1/t-type weights still need t away from 0
    switch (role) {
      case KernelRole::gInv: return t;
      case KernelRole::dgInv_dt: return 1.0;
      case KernelRole::G:
      case KernelRole::g:
        if (std::abs(t) <= kCausticEpsilon)
          throw CausticError("zero mode at t ~ 0: 1/t weight diverges");
        return 1.0 / t;
      case KernelRole::dG_dt:
        if (std::abs(t) <= kCausticEpsilon)
          throw CausticError("zero mode at t ~ 0: 1/t^2 weight diverges");
        return -1.0 / (t * t);
      default: break;
    }
  }

  const double s = std::sin(omega * t);
  if (role_has_caustic(role) && std::abs(s) <= kCausticEpsilon)
    throw CausticError("mode with omega = " + std::to_string(omega) +
                       " is at a caustic of t = " + std::to_string(t));
  switch (role) {
    case KernelRole::G: return omega * std::cos(omega * t) / s;
    case KernelRole::g: return omega / s;
    case KernelRole::gInv: return s / omega;
    case KernelRole::dG_dt: return -omega * omega / (s * s);
    case KernelRole::dgInv_dt: return std::cos(omega * t);
    default: break;
  }
  throw std::logic_error("unreachable");
}

KernelMatrix build_kernel(const LatticeSpec& spec, KernelRole role, double t) {
  spec.validate();
  if (role == KernelRole::E && spec.mass <= 0.0)
    throw MasslessVacuumError(
        "energy kernel with m = 0: the zero mode has no ground state");

  const Eigen::VectorXd omegas = mode_frequencies(spec);
  Eigen::VectorXd weights(spec.n_sites);
  for (int j = 0; j < spec.n_sites; ++j)
    weights[j] = kernel_mode_weight(role, omegas[j], t);

  KernelMatrix out;
  out.role = role;
  if (role != KernelRole::E) out.time = t;
  out.entries = mode_operator(spec, weights) / spec.spacing;
  return out;
}

double verify_identity(const LatticeSpec& spec, KernelIdentity which, double t,
                       double dt) {
  spec.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double dx = spec.spacing;
  const int n = spec.n_sites;

  const auto K = [&](KernelRole role, double at) {
    return build_kernel(spec, role, at).entries;
  };

  // centered stencils of total width dt
  const double h = 0.5 * dt;

  Eigen::MatrixXd residual(n, n);
  switch (which) {
    case KernelIdentity::gg: {
      residual = dx * (K(KernelRole::gInv, t) * K(KernelRole::g, t));
      residual.diagonal().array() -= 1.0 / dx;
      break;
    }
    case KernelIdentity::gG1: {
      const Eigen::MatrixXd lhs =
          dx * (K(KernelRole::gInv, t) * K(KernelRole::G, t));
      const Eigen::MatrixXd ddt =
          (K(KernelRole::gInv, t + h) - K(KernelRole::gInv, t - h)) /
          (2.0 * h);
      residual = lhs - ddt;
      break;
    }
    case KernelIdentity::gG2: {
      const Eigen::MatrixXd lhs =
          dx * (K(KernelRole::dgInv_dt, t) * K(KernelRole::G, t));
      // second derivative as a centered difference of the first-derivative
      // kernel; a plain second difference would sit on the 1/h^2 roundoff
      // floor at the benchmark dt
      const Eigen::MatrixXd d2dt2 =
          (K(KernelRole::dgInv_dt, t + h) - K(KernelRole::dgInv_dt, t - h)) /
          (2.0 * h);
      residual = lhs - K(KernelRole::g, t) - d2dt2;
      break;
    }
    case KernelIdentity::GG_appendix: {
      const Eigen::MatrixXd gg = K(KernelRole::G, t);
      const Eigen::MatrixXd lhs = dx * (gg * gg);
      const Eigen::MatrixXd ddt =
          (K(KernelRole::G, t + h) - K(KernelRole::G, t - h)) / (2.0 * h);
      // (laplacian - m^2) delta discretizes to -quadratic_form / dx
      residual = lhs + ddt + quadratic_form_matrix(spec) / dx;
      break;
    }
  }
  return residual.cwiseAbs().maxCoeff();
}

LightconeProfile lightcone_profile(const LatticeSpec& spec, double t,
                                   double margin) {
  spec.validate();
  if (!(t > 0.0)) throw std::invalid_argument("lightcone_profile: t must be > 0");
  if (margin < 0.0) throw std::invalid_argument("negative margin");
  const int n = spec.n_sites;
  // a single site has no spacelike separation to protect
  if (n > 1 && n * spec.spacing <= 2.0 * t + margin)
    throw PeriodicWrapError("light cone of radius t = " + std::to_string(t) +
                            " wraps the torus of circumference " +
                            std::to_string(n * spec.spacing));

  const Eigen::MatrixXd gi = build_kernel(spec, KernelRole::gInv, t).entries;
  LightconeProfile out;
  double peak = 0.0;
  for (int r = 0; r <= n / 2; ++r) {
    out.distance.push_back(r * spec.spacing);
    out.magnitude.push_back(std::abs(gi(r, 0)));
    peak = std::max(peak, out.magnitude.back());
  }

  const double floor = std::max(1e-280, 1e-12 * peak);
  const auto fit_slope = [&](double start, double* slope) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (size_t i = 0; i < out.distance.size(); ++i) {
      if (out.distance[i] <= start || out.magnitude[i] < floor) continue;
      const double x = out.distance[i], y = std::log(out.magnitude[i]);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++count;
    }
    if (count < 2) return false;
    *slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return true;
  };

  out.fit_start = t;
  if (!fit_slope(t, &out.decay_rate)) {
    out.fit_start = max_group_velocity(spec) * t;
    if (!fit_slope(out.fit_start, &out.decay_rate))
      out.decay_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

double max_group_velocity(const LatticeSpec& spec) {
  spec.validate();
  // dw/dk = sin(k dx) / (dx w) on the lattice, k / w continuum-sampled;
  // sample densely over the zone instead of assuming either form
  double best = 0.0;
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    const double k =
        std::numbers::pi * i / (samples * spec.spacing);  // [0, pi/dx]
    double w, v;
    if (spec.dispersion == Dispersion::Lattice) {
      const double s = std::sin(0.5 * k * spec.spacing);
      w = std::hypot(spec.mass, (2.0 / spec.spacing) * s);
      v = w <= 0.0 ? 1.0 : std::sin(k * spec.spacing) / (spec.spacing * w);
    } else {
      w = std::hypot(spec.mass, k);
      v = w <= 0.0 ? 1.0 : k / w;
    }
    best = std::max(best, std::abs(v));
  }
  return best;
}

}  // namespace lcr
