#pragma once

#include "elastodyne/model.hpp"

namespace elastodyne {

/// Quadrature weight of node plane k of a field: h^2 times the vertical norm entry.
double node_weight(const Layer& layer, FieldId f, int k);

/// 1/2 sum w rho |v|^2 over all layers.
double kinetic_energy(const Model& m, const StackState& s);

/// 1/2 sum w sigma_a : S sigma_b, S the isotropic compliance. With a = b this
/// is the strain energy; with the two half-step stresses it is the staggered
/// leapfrog potential term.
double compliance_product(const Model& m, const StackState& a, const StackState& b);

/// Single-layer versions, used by the fused update.
double kinetic_energy(const Layer& l, const WavefieldState& s);
double compliance_product(const Layer& l, const WavefieldState& a, const WavefieldState& b);

}  // namespace elastodyne
