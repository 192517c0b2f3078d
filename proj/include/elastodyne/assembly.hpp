#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <vector>

#include "elastodyne/model.hpp"

namespace elastodyne {

/// Global unknown numbering: layer by layer, fields in kAllFields order,
/// each field in its Field3D storage order.
struct StateLayout {
  std::vector<std::size_t> offset;  // [layer * kFieldCount + field]
  std::size_t size = 0;

  explicit StateLayout(const Model& m);
  std::size_t at(std::size_t layer, FieldId f) const { return offset[layer * kFieldCount + static_cast<int>(f)]; }
};

void pack(const Model& m, const StackState& s, std::vector<double>& out);
void unpack(const Model& m, const std::vector<double>& in, StackState& s);

/// d/dt u = L u, assembled column by column by probing the semi-discrete
/// rate functions; H is the block-diagonal energy norm (density and compliance).
struct AssembledOperator {
  Eigen::SparseMatrix<double> L;
  Eigen::SparseMatrix<double> H;
};

/// Throws std::length_error above `maxUnknowns`.
AssembledOperator assemble_operator(const Model& m, std::size_t maxUnknowns = 60000);

struct SkewResidual {
  double absolute = 0;  // max |HL + (HL)^T|
  double scale = 0;     // max |HL|
  double relative() const { return scale > 0 ? absolute / scale : absolute; }
};

/// The semi-discretization conserves energy iff HL is skew-symmetric.
SkewResidual skew_residual(const AssembledOperator& op);

/// Smallest two-layer stack at fine:coarse ratio p:q (fine spacing 1, nzN 9,
/// smoothly varying medium), coarse layer on top unless fineAbove.
Model oracle_stack(interp::GridRatio ratio, bool fineAbove, interp::Variant v = interp::Variant::standard,
                   iface::CouplingOptions opt = {});

}  // namespace elastodyne
