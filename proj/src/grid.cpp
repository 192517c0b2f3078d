#include "elastodyne/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "elastodyne/sbp1d.hpp"

namespace elastodyne {

SubGrid subgrid_of(FieldId f) {
  using S = Stagger;
  switch (f) {
    case FieldId::vx: return {S::M, S::N, S::N};
    case FieldId::vy: return {S::N, S::M, S::N};
    case FieldId::vz: return {S::N, S::N, S::M};
    case FieldId::sxx:
    case FieldId::syy:
    case FieldId::szz: return {S::N, S::N, S::N};
    case FieldId::sxy: return {S::M, S::M, S::N};
    case FieldId::sxz: return {S::M, S::N, S::M};
    case FieldId::syz: return {S::N, S::M, S::M};
  }
  throw std::logic_error("unknown field");
}

const char* field_name(FieldId f) {
  static const char* names[] = {"vx", "vy", "vz", "sxx", "syy", "szz", "sxy", "sxz", "syz"};
  return names[static_cast<int>(f)];
}

FieldId parse_field(const std::string& name) {
  for (FieldId f : kAllFields)
    if (name == field_name(f)) return f;
  throw std::invalid_argument("unknown field '" + name + "'");
}

void LayerGrid::validate() const {
  if (nzN < sbp::SbpSet1D::kMinPoints)
    throw std::invalid_argument("layer needs at least 9 vertical N points, got " + std::to_string(nzN));
  if (nx < 2 || ny < 2) throw std::invalid_argument("layer needs at least 2 horizontal points per axis");
  if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("layer spacing must be positive");
}

Field3D make_field(const LayerGrid& g, SubGrid s, double fill) { return Field3D(g.nx, g.ny, g.nz(s.z), fill); }

}  // namespace elastodyne
