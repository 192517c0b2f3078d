#include <doctest.h>

#include <Eigen/SparseCore>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "elastodyne/assembly.hpp"
#include "elastodyne/energy.hpp"
#include "elastodyne/simulation.hpp"

using namespace elastodyne;
using namespace elastodyne::sim;
namespace im = elastodyne::interp;
using std::numbers::pi;

namespace {

const medium::Material kSoft{800, 300, 1600};
const medium::Material kHard{1800, 600, 2100};

Model two_layer(int p, int q, int ncx = 0) {
  const double hf = 1.0, hc = hf * q / p;
  if (ncx == 0) ncx = p * ((6 + p - 1) / p);
  LayerGrid up{ncx * q / p, ncx * q / p, 9, hf, 0.0};
  LayerGrid lo{ncx, ncx, 9, hc, up.zBottom()};
  return build_model({up, lo}, {medium::constant_material(kSoft), medium::constant_material(kHard)});
}

double max_abs(const StackState& s) {
  double m = 0;
  for (const auto& st : s)
    for (const Field3D& f : st.f)
      for (double v : f.data) m = std::max(m, std::abs(v));
  return m;
}

void randomize(StackState& s, double vscale, double sscale, int seed = 1) {
  int c = seed;
  for (auto& st : s)
    for (FieldId f : kAllFields)
      for (double& x : st[f].data) x = std::sin(0.731 * ++c + 0.3 * seed) * (is_velocity(f) ? vscale : sscale);
}

}  // namespace

TEST_CASE("ricker wavelet") {
  CHECK(ricker(0.2, 10, 0.2) == 1.0);
  const double z = 1.0 / (pi * 10 * std::sqrt(2.0));
  CHECK(std::abs(ricker(0.15 + z, 10, 0.15)) < 1e-15);
  CHECK(std::abs(ricker(0.15 - z, 10, 0.15)) < 1e-15);
  CHECK(std::abs(ricker(0.45, 10, 0.15)) < 3e-7);
  CHECK_THROWS_AS(ricker(0, 0, 0), std::invalid_argument);
  const Ricker w = Ricker::centered(10, 2.0);
  CHECK(w.t0 == doctest::Approx(0.15));
  CHECK(w(0.15) == 2.0);
  CHECK(w(w.cutoff()) == 0.0);
  CHECK(std::abs(w(0.0)) < 5e-8);
}

TEST_CASE("energy of a single interior velocity node") {
  const Model m = build_model({LayerGrid{6, 6, 12, 2.0, 0.0}}, {medium::constant_material(kSoft)});
  StackState s = make_state(m);
  CHECK(staggered_energy(m, s, s, s) == 0.0);
  s[0][FieldId::vx](2, 3, 5) = 0.25;
  CHECK(staggered_energy(m, s, s, s) == doctest::Approx(0.5 * kSoft.rho * 0.0625 * 8.0).epsilon(1e-14));
}

TEST_CASE("zero state without sources stays zero") {
  const Model m = two_layer(1, 2);
  Simulator sim(m, 1e-4);
  for (int n = 0; n < 20; ++n) sim.step();
  CHECK(max_abs(sim.state()) == 0.0);
  CHECK(sim.steps() == 20);
}

TEST_CASE("one step matches the assembled operator split") {
  const Model m = two_layer(2, 3);
  const double dt = 0.5 * max_stable_dt(m);
  Simulator sim(m, dt);
  randomize(sim.state(), 1.0, 1e6);
  std::vector<double> u;
  pack(m, sim.state(), u);
  const auto op = assemble_operator(m);
  const StateLayout lay(m);
  Eigen::Map<Eigen::VectorXd> x(u.data(), static_cast<Eigen::Index>(u.size()));
  // Velocity entries come first within each layer block; split by field type.
  Eigen::VectorXd isVel = Eigen::VectorXd::Zero(x.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l)
    for (FieldId f : {FieldId::vx, FieldId::vy, FieldId::vz}) {
      const std::size_t b = lay.at(l, f);
      const std::size_t n = sim.state()[l][f].size();
      isVel.segment(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(n)).setOnes();
    }
  const Eigen::VectorXd isStr = Eigen::VectorXd::Ones(x.size()) - isVel;
  Eigen::VectorXd y = x;
  y += dt * isStr.cwiseProduct(op.L * y);
  y += dt * isVel.cwiseProduct(op.L * y);
  sim.step();
  std::vector<double> got;
  pack(m, sim.state(), got);
  double err = 0, scale = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    err = std::max(err, std::abs(got[i] - y[i]) / (isVel[i] > 0 ? 1.0 : 1e6));
    scale = std::max(scale, std::abs(y[i]) / (isVel[i] > 0 ? 1.0 : 1e6));
  }
  CHECK(err <= 1e-12 * scale);
}

TEST_CASE("leapfrog is time reversible") {
  const Model m = two_layer(1, 3);
  Simulator sim(m, 0.8 * max_stable_dt(m));
  randomize(sim.state(), 1.0, 1e6, 3);
  const StackState start = sim.state();
  for (int n = 0; n < 200; ++n) sim.step();
  sim.set_dt(-sim.dt());
  for (int n = 0; n < 200; ++n) sim.step();
  CHECK(sim.steps() == 0);
  double err = 0;
  for (std::size_t l = 0; l < start.size(); ++l)
    for (FieldId f : kAllFields)
      for (std::size_t q = 0; q < start[l][f].size(); ++q) {
        const double s = is_velocity(f) ? 1.0 : 1e6;
        err = std::max(err, std::abs(sim.state()[l][f].data[q] - start[l][f].data[q]) / s);
      }
  CHECK(err < 1e-10);
}

TEST_CASE("energy is conserved after the source stops, for every ratio") {
  std::vector<im::GridRatio> ratios = im::GridRatio::tabulated();
  ratios.push_back({1, 1});
  for (const auto& r : ratios) {
    CAPTURE(r.str());
    const Model m = two_layer(r.p, r.q);
    RunOptions o;
    o.dt = 0.8 * max_stable_dt(m);
    const Ricker w{200.0, 1.5 / 200.0, 1.0};
    o.nSteps = static_cast<long>(w.cutoff() / o.dt) + 600;
    o.sources.push_back({0, 2, 2, 4, w});
    const RunResult res = run_simulation(m, o);
    REQUIRE(!res.aborted);
    const std::size_t off = static_cast<std::size_t>(w.cutoff() / o.dt) + 2;
    const double e0 = res.energy.v[off];
    CHECK(e0 > 0);
    double drift = 0;
    for (std::size_t n = off; n < res.energy.v.size(); ++n) drift = std::max(drift, std::abs(res.energy.v[n] - e0) / e0);
    CHECK(drift < 1e-9);
  }
}

TEST_CASE("run_simulation outputs") {
  const Model m = two_layer(1, 2);
  RunOptions o;
  o.dt = 0.8 * max_stable_dt(m);
  o.nSteps = 150;
  o.sources.push_back({0, 3, 3, 4, Ricker{300.0, 0.005, 0.0}});
  o.receivers.push_back({"vz", 0, FieldId::vz, 5, 5, 3});
  o.receivers.push_back({"sxx", 1, FieldId::sxx, 1, 1, 2});

  SUBCASE("zero amplitude gives identically zero output") {
    const RunResult r = run_simulation(m, o);
    CHECK(r.seismograms.size() == 2);
    CHECK(r.seismograms[0].v.size() == 150);
    for (const Series& s : r.seismograms)
      for (double v : s.v) CHECK(v == 0.0);
    for (double e : r.energy.v) CHECK(e == 0.0);
    CHECK(r.seismograms[0].t[0] == doctest::Approx(o.dt));
    CHECK(r.seismograms[1].t[0] == doctest::Approx(0.5 * o.dt));
  }
  SUBCASE("doubling the amplitude doubles every sample exactly") {
    o.sources[0].wavelet.amplitude = 1.0;
    const RunResult a = run_simulation(m, o);
    o.sources[0].wavelet.amplitude = 2.0;
    const RunResult b = run_simulation(m, o);
    bool exact = true, nonzero = false;
    for (std::size_t r = 0; r < a.seismograms.size(); ++r)
      for (std::size_t n = 0; n < a.seismograms[r].v.size(); ++n) {
        exact = exact && b.seismograms[r].v[n] == 2 * a.seismograms[r].v[n];
        nonzero = nonzero || a.seismograms[r].v[n] != 0;
      }
    CHECK(exact);
    CHECK(nonzero);
  }
  SUBCASE("energy cadence and snapshots") {
    o.energyEvery = 10;
    o.snapshotTimes = {20 * o.dt, 100 * o.dt};
    o.snapshotDir = std::filesystem::temp_directory_path() / "elastodyne_test_snapshots";
    std::filesystem::remove_all(o.snapshotDir);
    const RunResult r = run_simulation(m, o);
    CHECK(r.energy.v.size() == 15);
    REQUIRE(r.snapshots.size() == 4);
    CHECK(std::filesystem::file_size(r.snapshots[0].path) == 4u * 12 * 8);
    CHECK(std::filesystem::file_size(r.snapshots[1].path) == 4u * 6 * 8);
    CHECK(std::filesystem::exists(r.snapshots[1].path.string() + ".hdr"));
  }
  SUBCASE("receivers off the sub-grid are rejected") {
    o.receivers.push_back({"bad", 0, FieldId::vz, 0, 0, 8});
    CHECK_THROWS_AS(run_simulation(m, o), std::out_of_range);
  }
}

TEST_CASE("watchdog stops an unstable run") {
  const Model m = two_layer(1, 2);
  RunOptions o;
  o.dt = 1.5 * max_stable_dt(m);
  o.nSteps = 5000;
  o.sources.push_back({0, 3, 3, 4, Ricker::centered(300.0)});
  o.receivers.push_back({"vz", 0, FieldId::vz, 5, 5, 3});
  const RunResult r = run_simulation(m, o);
  CHECK(r.aborted);
  CHECK(r.abortStep % 100 == 0);
  CHECK(r.stepsDone == r.abortStep);
  CHECK(r.seismograms[0].v.size() == static_cast<std::size_t>(r.stepsDone));
  CHECK(r.message.find(std::to_string(r.abortStep)) != std::string::npos);
}

TEST_CASE("plane shear wave converges under refinement") {
  // SH wave travelling along x, polarized in y: traction free on horizontal faces.
  auto phase_error = [](int n) {
    const double X = 64.0, h = X / n;
    const medium::Material mat{2000, 1000, 2000};
    const Model m = build_model({LayerGrid{n, 4, 9, h, 0.0}}, {medium::constant_material(mat)});
    const double k = 2 * pi / X, w = k * mat.cs, mu = mat.mu();
    const double dt = 0.1 * h / mat.cp;
    Simulator sim(m, dt);
    const LayerGrid& g = m.layers[0].grid;
    Field3D& vy = sim.state()[0][FieldId::vy];
    Field3D& sxy = sim.state()[0][FieldId::sxy];
    for (int kz = 0; kz < vy.nz; ++kz)
      for (int j = 0; j < vy.ny; ++j)
        for (int i = 0; i < n; ++i) {
          vy(i, j, kz) = std::sin(k * g.x_at(Stagger::N, i));
          sxy(i, j, kz) = -mu / mat.cs * std::sin(k * g.x_at(Stagger::M, i) + w * 0.5 * dt);
        }
    const double T = X / mat.cs;
    const long steps = std::lround(T / dt);
    for (long s = 0; s < steps; ++s) sim.step();
    const double t = steps * dt;
    double e = 0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(vy(i, 1, 4) - std::sin(k * (g.x_at(Stagger::N, i) - mat.cs * t))));
    return e;
  };
  const double e1 = phase_error(16), e2 = phase_error(32);
  MESSAGE("plane wave error ratio " << e1 / e2);
  CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("1D bar with free ends") {
  const double L = 1.0, c = 1.0, rho = 1.0;
  SUBCASE("zero initial data stays zero") {
    const auto r = run_1d({17, L, rho, c, 0, 100, 1}, [](double) { return 0.0; }, [](double) { return 0.0; });
    for (double v : r.v) CHECK(v == 0.0);
    for (double s : r.sigma) CHECK(s == 0.0);
  }
  SUBCASE("energy is conserved over 10^4 steps") {
    const double k = 3 * pi / L;
    const auto r = run_1d({41, L, rho, c, 0, 10000, 1}, [&](double x) { return std::sin(k * x) + 0.3 * std::cos(7 * x); },
                          [](double x) { return x * (1 - x); });
    const double e0 = r.energy.v.front();
    double drift = 0;
    for (double e : r.energy.v) drift = std::max(drift, std::abs(e - e0) / e0);
    CHECK(drift < 1e-10);
  }
  SUBCASE("standing wave convergence") {
    // sigma = sin(kx) cos(wt), v = cos(kx) sin(wt) / (rho c) satisfy the free ends.
    const double k = 2 * pi / L, w = c * k;
    // dt ~ h^2 keeps the second-order time error below the spatial one.
    auto errors = [&](int nN, double T) {
      const double h = L / (nN - 1);
      const double dt = h * h / c;
      const long steps = std::lround(T / dt);
      const auto r = run_1d({nN, L, rho, c, dt, steps, 0},
                            [&](double x) { return std::sin(k * x) * std::cos(-w * dt / 2); },
                            [](double) { return 0.0; });
      const double ts = (steps - 0.5) * dt;
      double all = 0, interior = 0;
      for (int i = 0; i < nN; ++i) {
        const double x = i * h;
        const double err = std::abs(r.sigma[i] - std::sin(k * x) * std::cos(w * ts));
        all = std::max(all, err);
        if (x > 0.3 * L && x < 0.7 * L) interior = std::max(interior, err);
      }
      return std::pair{all, interior};
    };
    const double order = std::log2(errors(41, 0.5).first / errors(81, 0.5).first);
    // Before boundary errors reach the middle, the interior stencil alone sets the rate.
    const double orderInterior = std::log2(errors(41, 0.1).second / errors(81, 0.1).second);
    MESSAGE("1D orders: global " << order << ", interior " << orderInterior);
    CHECK(order >= 2.0);
    CHECK(orderInterior > 3.5);
  }
}
