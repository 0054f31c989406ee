#pragma once

#include <stdexcept>
#include <string>

namespace lcr {

// Error taxonomy shared by every module. All of these are recoverable
// input/precondition failures; internal logic errors use assert().
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mode hit sin(omega*t) ~ 0, where the boundary kernels G and g diverge.
struct CausticError : Error {
  using Error::Error;
};

// m = 0 has no normalizable ground state; everything built on the
// energy kernel (vacua, coherent states, overlaps) refuses it.
struct MasslessVacuumError : Error {
  using Error::Error;
};

// The light cone of the probed region wraps around the periodic lattice.
struct PeriodicWrapError : Error {
  using Error::Error;
};

struct RegionMismatch : Error {
  using Error::Error;
};

struct SupportViolation : Error {
  using Error::Error;
};

struct NonSymplecticInput : Error {
  using Error::Error;
};

// find_local_gaussian_unitary: the two states differ on the complement.
struct ComplementMismatch : Error {
  using Error::Error;
};

// find_local_gaussian_unitary: cut correlations cannot be separated stably.
struct DegenerateSpectrum : Error {
  using Error::Error;
};

// vacuum_witness: a branch is not vacuum-equivalent on the probe region.
struct BranchNotVacuumEquivalent : Error {
  using Error::Error;
};

// local_unitary: f1'f1 != f2'f2, no unitary can exist.
struct RdmMismatch : Error {
  using Error::Error;
};

// local_unitary: singular values straddle the rank-decision band.
struct RankInstability : Error {
  using Error::Error;
};

// truncated Fock oracle asked for more than it can hold densely.
struct DimensionOverflow : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace lcr
