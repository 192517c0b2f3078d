#pragma once

#include <span>
#include <vector>

namespace elastodyne::plan {

/// Largest stable CFL constant of the fourth-order staggered interior stencil.
inline constexpr double kMaxCfl = 6.0 / 7.0;

struct LayerPlan {
  double cMin = 0;   // m/s
  double cMax = 0;   // m/s
  double depth = 0;  // m
  double dx = 0;     // m
  double nppw = 0;   // points per minimum wavelength
  double fMax = 0;   // Hz
};

struct CostReport {
  double spatialRatio = 1;
  double temporalRatio = 1;
  double totalRatio = 1;
  std::vector<double> perLayerPoints;
  double uniformPoints = 0;
  double dtNonuniform = 0;
  double dtUniform = 0;
};

double plan_spacing(double cMin, double fMax, double nppw);

/// cCfl * min_i(dx_i / cMax_i) / sqrt(dim).
double plan_timestep(std::span<const LayerPlan> layers, double cCfl, int dim = 3);

/// Uniform-over-nonuniform cost of the same domain; the uniform grid uses
/// spacing uniformDx and the largest cMax of all layers.
CostReport cost_ratios(std::span<const LayerPlan> layers, double extentX, double extentY, double uniformDx,
                       double cCfl = 0.8, int dim = 3);

/// A region of the cost thought experiment: relative volume, the spacing of
/// the layer containing it, and its maximum (normalized) wave speed.
struct CostRegion {
  double volume = 1;
  double dx = 1;
  double cMax = 1;
};

/// sum(volume / dx^3) * max(cMax / dx): space points times relative step count.
double space_time_units(std::span<const CostRegion> regions);

/// Number of cells of size dx that best fits depth; throws if the fit is off by
/// more than dx/2 or leaves no cells.
int snap_depth(double depth, double dx);

/// n * dx == extent up to rounding.
bool divides(double extent, double dx);

}  // namespace elastodyne::plan
