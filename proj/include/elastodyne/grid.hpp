#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace elastodyne {

enum class Stagger { N, M };

/// Per-axis staggering of one sub-grid.
struct SubGrid {
  Stagger x, y, z;
  bool operator==(const SubGrid&) const = default;
};

enum class FieldId { vx, vy, vz, sxx, syy, szz, sxy, sxz, syz };
inline constexpr int kFieldCount = 9;
inline constexpr std::array<FieldId, kFieldCount> kAllFields = {FieldId::vx,  FieldId::vy,  FieldId::vz,
                                                                FieldId::sxx, FieldId::syy, FieldId::szz,
                                                                FieldId::sxy, FieldId::sxz, FieldId::syz};

SubGrid subgrid_of(FieldId f);
const char* field_name(FieldId f);
/// Throws std::invalid_argument for unknown names.
FieldId parse_field(const std::string& name);
inline bool is_velocity(FieldId f) { return static_cast<int>(f) < 3; }

enum class FaceRole { free_surface, interface };

/// Geometry of one uniformly spaced layer. x and y are periodic with nx, ny
/// points for both staggerings; z has nzN boundary-inclusive N points and
/// nzM = nzN - 1 M points. z grows downward from zTop.
struct LayerGrid {
  int nx = 0;
  int ny = 0;
  int nzN = 0;
  double h = 1.0;
  double zTop = 0.0;
  FaceRole top = FaceRole::free_surface;
  FaceRole bottom = FaceRole::free_surface;

  int nzM() const { return nzN - 1; }
  int nz(Stagger s) const { return s == Stagger::N ? nzN : nzN - 1; }
  double depth() const { return h * (nzN - 1); }
  double zBottom() const { return zTop + depth(); }
  double extent_x() const { return nx * h; }
  double extent_y() const { return ny * h; }

  double x_at(Stagger s, int i) const { return (i + (s == Stagger::M ? 0.5 : 0.0)) * h; }
  double y_at(Stagger s, int j) const { return (j + (s == Stagger::M ? 0.5 : 0.0)) * h; }
  double z_at(Stagger s, int k) const { return zTop + (k + (s == Stagger::M ? 0.5 : 0.0)) * h; }

  /// Throws std::invalid_argument when the geometry is unusable.
  void validate() const;
};

/// Dense 3D array, x fastest.
struct Field3D {
  int nx = 0, ny = 0, nz = 0;
  std::vector<double> data;

  Field3D() = default;
  Field3D(int nx_, int ny_, int nz_, double fill = 0.0)
      : nx(nx_), ny(ny_), nz(nz_), data(static_cast<std::size_t>(nx_) * ny_ * nz_, fill) {}

  std::size_t plane() const { return static_cast<std::size_t>(nx) * ny; }
  std::size_t index(int i, int j, int k) const { return i + static_cast<std::size_t>(nx) * (j + static_cast<std::size_t>(ny) * k); }
  double& operator()(int i, int j, int k) { return data[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data[index(i, j, k)]; }
  double* slice(int k) { return data.data() + plane() * k; }
  const double* slice(int k) const { return data.data() + plane() * k; }
  std::size_t size() const { return data.size(); }
  void fill(double v) { std::fill(data.begin(), data.end(), v); }
};

Field3D make_field(const LayerGrid& g, SubGrid s, double fill = 0.0);

}  // namespace elastodyne
