#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "elastodyne/grid.hpp"

namespace elastodyne::medium {

enum class ScalarKind { cp, cs, rho };
const char* to_string(ScalarKind k);
ScalarKind parse_scalar_kind(const std::string& s);

/// Regular samples of one scalar, x fastest, z slowest (z grows downward).
struct ParameterGrid {
  std::array<int, 3> dims{0, 0, 0};
  double spacing = 1.0;
  std::array<double, 3> origin{0, 0, 0};
  ScalarKind kind = ScalarKind::cp;
  std::vector<float> values;

  float at(int i, int j, int k) const {
    return values[i + static_cast<std::size_t>(dims[0]) * (j + static_cast<std::size_t>(dims[1]) * k)];
  }
  /// Trilinear value at (x,y,z); nearest-sample extrapolation within the outer
  /// half cell. Throws std::out_of_range beyond that.
  double sample(double x, double y, double z) const;
};

/// Reads a raw little-endian float32 file and checks value validity for the kind.
ParameterGrid load_raw_model(const std::filesystem::path& path, std::array<int, 3> dims, double spacing,
                             ScalarKind kind, std::array<double, 3> origin = {0, 0, 0});

/// Reads `<path>.hdr` (key=value: nx, ny, nz, spacing, kind, optional ox/oy/oz) and the raw file.
ParameterGrid load_model(const std::filesystem::path& path);

/// Writes the raw file and its sidecar header.
void write_model(const std::filesystem::path& path, const ParameterGrid& grid);

std::filesystem::path sidecar_path(const std::filesystem::path& raw);

/// cs = cp / ratio(t) and rho(t) with both ratio and rho linear in depth fraction t = k/(nz-1).
std::pair<ParameterGrid, ParameterGrid> synthesize_cs_rho(const ParameterGrid& cp, double ratioTop, double ratioBottom,
                                                          double rhoTop, double rhoBottom);

/// Trilinear samples of `grid` at every node of sub-grid `s` of `layer`.
Field3D sample_to_subgrid(const ParameterGrid& grid, const LayerGrid& layer, SubGrid s);

struct Material {
  double cp = 0;
  double cs = 0;
  double rho = 0;
  double lambda() const { return rho * (cp * cp - 2 * cs * cs); }
  double mu() const { return rho * cs * cs; }
  bool operator==(const Material&) const = default;
};

/// Material lookup by physical coordinate.
using MaterialFn = std::function<Material(double x, double y, double z)>;

/// Piecewise-constant depth zones; zone i covers [top_i, top_{i+1}). A point
/// exactly on a zone boundary belongs to the deeper zone.
struct Zone {
  double top = 0;
  Material m;
  bool operator==(const Zone&) const = default;
};
MaterialFn constant_material(Material m);
MaterialFn zoned_material(std::vector<Zone> zones);
MaterialFn gridded_material(ParameterGrid cp, ParameterGrid cs, ParameterGrid rho);

/// Coefficients where the update equations consume them: buoyancy on the
/// velocity sub-grids, lambda and mu on the normal-stress sub-grid, mu on the
/// shear sub-grids.
struct IsotropicMedium {
  Field3D bx, by, bz;     // 1/rho
  Field3D lam, mu;        // (N,N,N)
  Field3D muxy, muxz, muyz;
  double cpMax = 0, csMin = 0, cpMin = 0;
};

/// Samples `fn` at every sub-grid node. Nodes on the layer's own top/bottom
/// face are evaluated a hair inside the layer so that a zone or layer boundary
/// coinciding with the face picks this layer's material.
IsotropicMedium build_medium(const LayerGrid& layer, const MaterialFn& fn);

/// Throws std::invalid_argument unless rho > 0, cs > 0 and the bulk modulus
/// is positive (cp^2 > 4/3 cs^2), i.e. the compliance is positive definite.
void check_material(const Material& m);

}  // namespace elastodyne::medium
