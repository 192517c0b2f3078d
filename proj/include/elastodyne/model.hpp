#pragma once

#include <vector>

#include "elastodyne/interface.hpp"
#include "elastodyne/wavefield3d.hpp"

namespace elastodyne {

/// A vertical stack of layers, top to bottom, with one coupling per interface.
struct Model {
  std::vector<Layer> layers;
  std::vector<iface::InterfaceCoupling> couplings;  // couplings[i] joins layers i and i+1

  std::size_t unknowns() const;
};

using StackState = std::vector<WavefieldState>;

/// Layer grids must be ordered top to bottom and share horizontal extents;
/// face roles are set here (outer faces free surface, inner faces interface).
Model build_model(std::vector<LayerGrid> grids, const std::vector<medium::MaterialFn>& media,
                  interp::Variant variant = interp::Variant::standard, iface::CouplingOptions options = {});

StackState make_state(const Model& m);

/// Stress rates (incl. interface penalties) from the velocities of `s`.
void stress_rates(const Model& m, const StackState& s, StackState& rhs);
/// Velocity rates (incl. free-surface and interface penalties) from the stresses of `s`.
void velocity_rates(const Model& m, const StackState& s, StackState& rhs);

}  // namespace elastodyne
