#include "elastodyne/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace elastodyne {

std::size_t Model::unknowns() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += WavefieldState(l.grid).unknowns();
  return n;
}

Model build_model(std::vector<LayerGrid> grids, const std::vector<medium::MaterialFn>& media, interp::Variant variant,
                  iface::CouplingOptions options) {
  if (grids.empty()) throw std::invalid_argument("model needs at least one layer");
  if (grids.size() != media.size()) throw std::invalid_argument("one medium per layer required");
  Model m;
  for (std::size_t i = 0; i < grids.size(); ++i) {
    grids[i].top = i == 0 ? FaceRole::free_surface : FaceRole::interface;
    grids[i].bottom = i + 1 == grids.size() ? FaceRole::free_surface : FaceRole::interface;
    if (i > 0 && std::abs(grids[i].zTop - grids[i - 1].zBottom()) > 1e-9 * grids[i].h)
      throw std::invalid_argument("layer " + std::to_string(i) + " does not start where the layer above ends");
    grids[i].validate();
    m.layers.emplace_back(grids[i], medium::build_medium(grids[i], media[i]));
  }
  for (std::size_t i = 0; i + 1 < grids.size(); ++i)
    m.couplings.push_back(iface::build_interface(grids[i], grids[i + 1], variant, options));
  return m;
}

StackState make_state(const Model& m) {
  StackState s;
  for (const Layer& l : m.layers) s.emplace_back(l.grid);
  return s;
}

void stress_rates(const Model& m, const StackState& s, StackState& rhs) {
  for (std::size_t i = 0; i < m.layers.size(); ++i) stress_rhs(s[i], m.layers[i], rhs[i]);
  for (std::size_t i = 0; i < m.couplings.size(); ++i)
    iface::add_stress_corrections(m.layers[i], m.layers[i + 1], s[i], s[i + 1], m.couplings[i], rhs[i], rhs[i + 1]);
}

void velocity_rates(const Model& m, const StackState& s, StackState& rhs) {
  for (std::size_t i = 0; i < m.layers.size(); ++i) velocity_rhs(s[i], m.layers[i], rhs[i]);
  for (std::size_t i = 0; i < m.couplings.size(); ++i)
    iface::add_velocity_corrections(m.layers[i], m.layers[i + 1], s[i], s[i + 1], m.couplings[i], rhs[i], rhs[i + 1]);
}

}  // namespace elastodyne
