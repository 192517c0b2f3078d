#pragma once

#include <array>

#include "elastodyne/grid.hpp"
#include "elastodyne/medium.hpp"
#include "elastodyne/sbp1d.hpp"

namespace elastodyne {

/// The nine fields of one layer on their sub-grids.
struct WavefieldState {
  std::array<Field3D, kFieldCount> f;

  WavefieldState() = default;
  explicit WavefieldState(const LayerGrid& g);

  Field3D& operator[](FieldId id) { return f[static_cast<int>(id)]; }
  const Field3D& operator[](FieldId id) const { return f[static_cast<int>(id)]; }
  void zero();
  std::size_t unknowns() const;
};

/// One layer: geometry, vertical SBP operators, and material coefficients.
struct Layer {
  LayerGrid grid;
  sbp::SbpSet1D sbpZ;
  medium::IsotropicMedium med;

  Layer(const LayerGrid& g, medium::IsotropicMedium m);
};

/// Time derivatives of vx, vy, vz from the stresses in `s`, written into the
/// velocity fields of `out` (stress fields of `out` untouched). z-derivatives
/// of sxz, syz, szz carry the free-surface penalties on free-surface faces.
void velocity_rhs(const WavefieldState& s, const Layer& layer, WavefieldState& out);

/// Time derivatives of the six stresses from the velocities in `s`, written
/// into the stress fields of `out`. Free-surface faces leave these unmodified.
void stress_rhs(const WavefieldState& s, const Layer& layer, WavefieldState& out);

/// Periodic horizontal 4-point staggered difference along x of one z-plane,
/// accumulated: out += scale * D u. `fromN` selects N->M (true) or M->N.
void add_dx_plane(const double* u, double* out, int nx, int ny, bool fromN, double scale);
void add_dy_plane(const double* u, double* out, int nx, int ny, bool fromN, double scale);

}  // namespace elastodyne
