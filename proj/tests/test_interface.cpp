#include <doctest.h>

#include <cmath>
#include <numbers>

#include "elastodyne/interface.hpp"

using namespace elastodyne;
using namespace elastodyne::iface;
namespace im = elastodyne::interp;

namespace {

const medium::Material kRock{3000, 1500, 2000};

struct Pair {
  Layer U, L;
};

Pair make_pair(double hU, int nU, double hL, int nL) {
  LayerGrid u{nU, nU, 9, hU, 0.0, FaceRole::free_surface, FaceRole::interface};
  LayerGrid l{nL, nL, 9, hL, u.zBottom(), FaceRole::interface, FaceRole::free_surface};
  const auto fn = medium::constant_material(kRock);
  return {Layer(u, medium::build_medium(u, fn)), Layer(l, medium::build_medium(l, fn))};
}

template <class F>
void fill_all(WavefieldState& s, const LayerGrid& g, F fn) {
  for (FieldId id : kAllFields) {
    Field3D& f = s[id];
    const SubGrid sg = subgrid_of(id);
    for (int k = 0; k < f.nz; ++k)
      for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i)
          f(i, j, k) = fn(static_cast<int>(id), g.x_at(sg.x, i), g.y_at(sg.y, j), g.z_at(sg.z, k));
  }
}

double max_abs(const WavefieldState& s) {
  double m = 0;
  for (const Field3D& f : s.f)
    for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("continuous fields produce no interface correction") {
  for (bool coarseAbove : {true, false}) {
    CAPTURE(coarseAbove);
    const Pair pr = coarseAbove ? make_pair(3.0, 4, 1.0, 12) : make_pair(1.0, 12, 3.0, 4);
    const InterfaceCoupling c = build_interface(pr.U.grid, pr.L.grid);
    CHECK(c.upperIsFine == !coarseAbove);
    CHECK(c.ratio == im::GridRatio{1, 3});
    WavefieldState sU(pr.U.grid), sL(pr.L.grid), rU(pr.U.grid), rL(pr.L.grid);
    // Constant in x, y and linear in z on every field: traces agree exactly.
    auto fn = [](int id, double, double, double z) { return 1.0 + id + 0.25 * (id + 1) * z; };
    fill_all(sU, pr.U.grid, fn);
    fill_all(sL, pr.L.grid, fn);
    add_interface_corrections(pr.U, pr.L, sU, sL, c, rU, rL);
    // Round-off relative to stiffness times field size.
    const double tol = 1e-13 * (kRock.lambda() + 2 * kRock.mu()) * 20;
    CHECK(max_abs(rU) < tol);
    CHECK(max_abs(rL) < tol);
  }
}

TEST_CASE("a velocity jump is penalized on both sides with opposite signs") {
  const Pair pr = make_pair(2.0, 4, 1.0, 8);
  const InterfaceCoupling c = build_interface(pr.U.grid, pr.L.grid);
  WavefieldState sU(pr.U.grid), sL(pr.L.grid), rU(pr.U.grid), rL(pr.L.grid);
  sU[FieldId::vz].fill(1.0);
  add_stress_corrections(pr.U, pr.L, sU, sL, c, rU, rL);
  const double above = rU[FieldId::szz](0, 0, pr.U.grid.nzN - 1);
  const double below = rL[FieldId::szz](0, 0, 0);
  CHECK(above < 0);
  CHECK(below < 0);
  CHECK(rU[FieldId::sxx](1, 2, pr.U.grid.nzN - 1) / above ==
        doctest::Approx(kRock.lambda() / (kRock.lambda() + 2 * kRock.mu())));
  CHECK(rU[FieldId::szz](0, 0, pr.U.grid.nzN - 2) == 0.0);
  CHECK(max_abs(rU) > 0);

  // Disabled traces are skipped entirely.
  CouplingOptions off;
  off.enabled[static_cast<int>(Trace::vz)] = false;
  const InterfaceCoupling c2 = build_interface(pr.U.grid, pr.L.grid, im::Variant::standard, off);
  WavefieldState qU(pr.U.grid), qL(pr.L.grid);
  add_stress_corrections(pr.U, pr.L, sU, sL, c2, qU, qL);
  CHECK(max_abs(qU) == 0.0);
  CHECK(max_abs(qL) == 0.0);
}

TEST_CASE("smooth periodic traces have a small mismatch that shrinks with refinement") {
  auto mismatch = [](int nC) {
    const double X = 24.0;
    const Pair pr = make_pair(X / nC, nC, X / (2 * nC), 2 * nC);
    const InterfaceCoupling c = build_interface(pr.U.grid, pr.L.grid);
    WavefieldState sU(pr.U.grid), sL(pr.L.grid), rU(pr.U.grid), rL(pr.L.grid);
    const double k = 2 * std::numbers::pi / X;
    auto fn = [k](int id, double x, double y, double) { return std::sin(k * x + id) * std::cos(k * y); };
    fill_all(sU, pr.U.grid, fn);
    fill_all(sL, pr.L.grid, fn);
    add_velocity_corrections(pr.U, pr.L, sU, sL, c, rU, rL);
    return std::max(max_abs(rU), max_abs(rL));
  };
  const double e1 = mismatch(8), e2 = mismatch(16);
  CHECK(e2 < e1 / 4);
}

TEST_CASE("trace extraction uses the face value or the boundary projection") {
  const LayerGrid g{4, 4, 9, 1.0, 0.0};
  WavefieldState s(g);
  for (FieldId id : {FieldId::vz, FieldId::szz}) {
    Field3D& f = s[id];
    const SubGrid sg = subgrid_of(id);
    for (int k = 0; k < f.nz; ++k)
      for (int p = 0; p < static_cast<int>(f.plane()); ++p) f.slice(k)[p] = 2.0 + 3.0 * g.z_at(sg.z, k);
  }
  for (double v : extract_trace(s, Trace::vz, false)) CHECK(v == doctest::Approx(2.0));
  for (double v : extract_trace(s, Trace::vz, true)) CHECK(v == doctest::Approx(2.0 + 3.0 * g.zBottom()));
  for (double v : extract_trace(s, Trace::szz, true)) CHECK(v == doctest::Approx(2.0 + 3.0 * g.zBottom()));
  CHECK(trace_kind(Trace::sxz) == 0);
  CHECK(trace_kind(Trace::vy) == 1);
  CHECK(trace_kind(Trace::szz) == 2);
}

TEST_CASE("incompatible layers are rejected") {
  const LayerGrid u{4, 4, 9, 2.0, 0.0};
  CHECK_THROWS_AS(build_interface(u, LayerGrid{8, 6, 9, 1.0, 16.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_interface(u, LayerGrid{10, 10, 9, 0.8, 16.0}), std::invalid_argument);
  CHECK_NOTHROW(build_interface(u, LayerGrid{8, 8, 9, 1.0, 16.0}));
  CHECK_NOTHROW(build_interface(u, LayerGrid{4, 4, 9, 2.0, 16.0}));
}
