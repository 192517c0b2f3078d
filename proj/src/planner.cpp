#include "elastodyne/planner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elastodyne::plan {

double plan_spacing(double cMin, double fMax, double nppw) {
  if (!(cMin > 0) || !(fMax > 0) || !(nppw > 0)) throw std::invalid_argument("plan_spacing: inputs must be positive");
  return cMin / (fMax * nppw);
}

double plan_timestep(std::span<const LayerPlan> layers, double cCfl, int dim) {
  if (layers.empty()) throw std::invalid_argument("plan_timestep: no layers");
  if (!(cCfl > 0) || cCfl > kMaxCfl + 1e-15)
    throw std::invalid_argument("CFL constant " + std::to_string(cCfl) + " outside (0, 6/7]");
  if (dim < 1 || dim > 3) throw std::invalid_argument("plan_timestep: dimension must be 1, 2 or 3");
  double ratio = INFINITY;
  for (const LayerPlan& l : layers) {
    if (!(l.dx > 0) || !(l.cMax > 0)) throw std::invalid_argument("plan_timestep: layer needs positive dx and cMax");
    ratio = std::min(ratio, l.dx / l.cMax);
  }
  return cCfl * ratio / std::sqrt(static_cast<double>(dim));
}

bool divides(double extent, double dx) {
  const double n = extent / dx;
  return n >= 1 && std::abs(n - std::round(n)) < 1e-9 * n;
}

CostReport cost_ratios(std::span<const LayerPlan> layers, double extentX, double extentY, double uniformDx,
                       double cCfl, int dim) {
  if (layers.empty()) throw std::invalid_argument("cost_ratios: no layers");
  CostReport r;
  double total = 0, depth = 0, cMax = 0;
  for (const LayerPlan& l : layers) {
    if (!divides(extentX, l.dx) || !divides(extentY, l.dx) || !divides(l.depth, l.dx))
      throw std::invalid_argument("layer spacing " + std::to_string(l.dx) + " does not divide the layer extents");
    const double pts = (extentX / l.dx) * (extentY / l.dx) * (l.depth / l.dx);
    r.perLayerPoints.push_back(pts);
    total += pts;
    depth += l.depth;
    cMax = std::max(cMax, l.cMax);
  }
  if (!divides(extentX, uniformDx) || !divides(extentY, uniformDx) || !divides(depth, uniformDx))
    throw std::invalid_argument("uniform spacing " + std::to_string(uniformDx) + " does not divide the domain");
  r.uniformPoints = (extentX / uniformDx) * (extentY / uniformDx) * (depth / uniformDx);
  r.dtNonuniform = plan_timestep(layers, cCfl, dim);
  LayerPlan uniform;
  uniform.dx = uniformDx;
  uniform.cMax = cMax;
  r.dtUniform = plan_timestep(std::span<const LayerPlan>(&uniform, 1), cCfl, dim);
  r.spatialRatio = r.uniformPoints / total;
  r.temporalRatio = r.dtNonuniform / r.dtUniform;
  r.totalRatio = r.spatialRatio * r.temporalRatio;
  return r;
}

double space_time_units(std::span<const CostRegion> regions) {
  if (regions.empty()) throw std::invalid_argument("space_time_units: no regions");
  double pts = 0, steps = 0;
  for (const CostRegion& g : regions) {
    if (!(g.dx > 0) || !(g.volume >= 0) || !(g.cMax > 0)) throw std::invalid_argument("space_time_units: bad region");
    pts += g.volume / (g.dx * g.dx * g.dx);
    steps = std::max(steps, g.cMax / g.dx);
  }
  return pts * steps;
}

int snap_depth(double depth, double dx) {
  if (!(dx > 0) || !(depth > 0)) throw std::invalid_argument("snap_depth: depth and dx must be positive");
  const long n = std::lround(depth / dx);
  if (n < 1 || std::abs(n * dx - depth) > 0.5 * dx)
    throw std::invalid_argument("depth " + std::to_string(depth) + " cannot be snapped to spacing " + std::to_string(dx));
  return static_cast<int>(n);
}

}  // namespace elastodyne::plan
