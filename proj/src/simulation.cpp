#include "elastodyne/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "elastodyne/energy.hpp"
#include "elastodyne/planner.hpp"

namespace elastodyne::sim {
namespace {

constexpr FieldId kStress[] = {FieldId::sxx, FieldId::syy, FieldId::szz, FieldId::sxy, FieldId::sxz, FieldId::syz};
constexpr FieldId kVelocity[] = {FieldId::vx, FieldId::vy, FieldId::vz};

void axpy(Field3D& y, double a, const Field3D& x) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
  double* yp = y.data.data();
  const double* xp = x.data.data();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t q = 0; q < n; ++q) yp[q] += a * xp[q];
}

bool all_finite(const Field3D& f) {
  for (double v : f.data)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

double ricker(double t, double fc, double t0) {
  if (!(fc > 0)) throw std::invalid_argument("Ricker central frequency must be positive");
  const double a = std::numbers::pi * fc * (t - t0);
  const double a2 = a * a;
  return (1 - 2 * a2) * std::exp(-a2);
}

void check_node(const Model& m, int layer, FieldId f, int i, int j, int k) {
  if (layer < 0 || layer >= static_cast<int>(m.layers.size()))
    throw std::out_of_range("layer " + std::to_string(layer) + " does not exist");
  const LayerGrid& g = m.layers[layer].grid;
  const int nz = g.nz(subgrid_of(f).z);
  if (i < 0 || i >= g.nx || j < 0 || j >= g.ny || k < 0 || k >= nz)
    throw std::out_of_range(std::string("node (") + std::to_string(i) + "," + std::to_string(j) + "," +
                            std::to_string(k) + ") is outside the " + field_name(f) + " sub-grid of layer " +
                            std::to_string(layer));
}

double max_stable_dt(const Model& m) {
  double r = INFINITY;
  for (const Layer& l : m.layers) r = std::min(r, l.grid.h / l.med.cpMax);
  return plan::kMaxCfl * r / std::sqrt(3.0);
}

Simulator::Simulator(const Model& m, double dt) : m_(m), dt_(dt), s_(make_state(m)), rhs_(make_state(m)) {
  if (!(dt != 0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be finite and nonzero");
  if (std::abs(dt) > max_stable_dt(m))
    std::fprintf(stderr, "warning: dt = %.6g exceeds the stability bound %.6g; expect blow-up\n", std::abs(dt),
                 max_stable_dt(m));
}

void Simulator::add_source(const SourceSpec& s) {
  check_node(m_, s.layer, FieldId::sxx, s.i, s.j, s.k);
  if (!(s.wavelet.fc > 0)) throw std::invalid_argument("source central frequency must be positive");
  sources_.push_back(s);
}

void Simulator::stress_update(double* energy) {
  // Stress rates at level n, optionally with the source at t_{n+1/2}.
  stress_rates(m_, s_, rhs_);
  const long n = dt_ > 0 ? n_ : n_ - 1;
  const double tHalf = (n + 0.5) * dt_abs_();
  for (const SourceSpec& src : sources_) {
    const double w = src.wavelet(tHalf);
    if (w == 0.0) continue;
    for (FieldId f : {FieldId::sxx, FieldId::syy, FieldId::szz}) rhs_[src.layer][f](src.i, src.j, src.k) += w;
  }
  if (energy) {
    double e = 0;
    for (std::size_t i = 0; i < m_.layers.size(); ++i) {
      const Layer& l = m_.layers[i];
      e += kinetic_energy(l, s_[i]) + compliance_product(l, s_[i], s_[i]) + dt_ * compliance_product(l, s_[i], rhs_[i]);
    }
    *energy = e;
  }
  for (std::size_t i = 0; i < m_.layers.size(); ++i)
    for (FieldId f : kStress) axpy(s_[i][f], dt_, rhs_[i][f]);
}

void Simulator::velocity_update() {
  velocity_rates(m_, s_, rhs_);
  for (std::size_t i = 0; i < m_.layers.size(); ++i)
    for (FieldId f : kVelocity) axpy(s_[i][f], dt_, rhs_[i][f]);
}

void Simulator::step(double* energy) {
  if (dt_ > 0) {
    stress_update(energy);
    velocity_update();
    ++n_;
  } else {
    velocity_update();
    stress_update(nullptr);
    --n_;
  }
}

bool Simulator::finite() const {
  for (const WavefieldState& st : s_)
    for (const Field3D& f : st.f)
      if (!all_finite(f)) return false;
  return true;
}

double staggered_energy(const Model& m, const StackState& v, const StackState& older, const StackState& newer) {
  return kinetic_energy(m, v) + compliance_product(m, older, newer);
}

std::vector<SnapshotFile> write_vz_snapshots(const Model& m, const StackState& s, double y, double t,
                                             const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<SnapshotFile> out;
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    const LayerGrid& g = m.layers[li].grid;
    const Field3D& vz = s[li][FieldId::vz];
    const int j = std::clamp(static_cast<int>(std::lround(y / g.h)), 0, g.ny - 1);
    char name[64];
    std::snprintf(name, sizeof name, "vz_layer%zu_t%.6f.f32", li, t);
    const auto path = dir / name;
    std::ofstream raw(path, std::ios::binary);
    if (!raw) throw std::runtime_error("cannot write snapshot " + path.string());
    for (int k = 0; k < vz.nz; ++k)
      for (int i = 0; i < vz.nx; ++i) {
        const float v = static_cast<float>(vz(i, j, k));
        raw.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
    std::ofstream hdr(path.string() + ".hdr");
    hdr.precision(17);
    hdr << "layer=" << li << "\nfield=vz\nnx=" << vz.nx << "\nnz=" << vz.nz << "\nspacing=" << g.h
        << "\nx0=" << g.x_at(Stagger::N, 0) << "\nz0=" << g.z_at(Stagger::M, 0) << "\ny=" << g.y_at(Stagger::N, j)
        << "\ntime=" << t << "\n";
    out.push_back({static_cast<int>(li), t, path});
  }
  return out;
}

double relative_drift(const Series& energy, double tFrom) {
  double lo = INFINITY, hi = -INFINITY, mag = 0;
  for (std::size_t i = 0; i < energy.v.size(); ++i) {
    if (energy.t[i] < tFrom) continue;
    lo = std::min(lo, energy.v[i]);
    hi = std::max(hi, energy.v[i]);
    mag = std::max(mag, std::abs(energy.v[i]));
  }
  if (!(hi >= lo)) return 0;
  return mag > 0 ? (hi - lo) / mag : hi - lo;
}

double source_off_time(const std::vector<SourceSpec>& sources) {
  double t = 0;
  for (const SourceSpec& s : sources) t = std::max(t, s.wavelet.cutoff());
  return t;
}

RunResult run_simulation(const Model& m, const RunOptions& opts) {
  if (opts.nSteps < 0) throw std::invalid_argument("negative step count");
  if (!(opts.dt > 0)) throw std::invalid_argument("run needs a positive time step");
  for (const ReceiverSpec& r : opts.receivers) check_node(m, r.layer, r.field, r.i, r.j, r.k);
  Simulator sim(m, opts.dt);
  for (const SourceSpec& s : opts.sources) sim.add_source(s);

  RunResult res;
  res.seismograms.resize(opts.receivers.size());
  for (Series& s : res.seismograms) {
    s.t.reserve(opts.nSteps);
    s.v.reserve(opts.nSteps);
  }
  std::vector<double> pending(opts.snapshotTimes);
  std::sort(pending.begin(), pending.end());
  std::size_t nextSnap = 0;
  const double dt = opts.dt;

  for (long n = 0; n < opts.nSteps; ++n) {
    double e = 0;
    const bool wantEnergy = opts.energyEvery > 0 && n % opts.energyEvery == 0;
    sim.step(wantEnergy ? &e : nullptr);
    if (wantEnergy) {
      res.energy.t.push_back(n * dt);
      res.energy.v.push_back(e);
    }
    for (std::size_t r = 0; r < opts.receivers.size(); ++r) {
      const ReceiverSpec& rs = opts.receivers[r];
      const double t = is_velocity(rs.field) ? (n + 1) * dt : (n + 0.5) * dt;
      res.seismograms[r].t.push_back(t);
      res.seismograms[r].v.push_back(sim.state()[rs.layer][rs.field](rs.i, rs.j, rs.k));
    }
    res.stepsDone = n + 1;
    const double tv = (n + 1) * dt;
    while (nextSnap < pending.size() && pending[nextSnap] <= tv + 0.5 * dt) {
      if (!opts.snapshotDir.empty()) {
        auto files = write_vz_snapshots(m, sim.state(), opts.snapshotY, tv, opts.snapshotDir);
        res.snapshots.insert(res.snapshots.end(), files.begin(), files.end());
      }
      ++nextSnap;
    }
    const bool check = (opts.watchdogEvery > 0 && (n + 1) % opts.watchdogEvery == 0) || n + 1 == opts.nSteps;
    if (check && (!sim.finite() || (wantEnergy && !std::isfinite(e)))) {
      res.aborted = true;
      res.abortStep = n + 1;
      res.message = "non-finite wavefield detected at step " + std::to_string(n + 1) + " (t = " +
                    std::to_string(tv) + " s); the time step is likely above the stability limit";
      break;
    }
    if (opts.progress && opts.progressEvery > 0 && (n + 1) % opts.progressEvery == 0) opts.progress(n + 1, tv);
  }
  return res;
}

Bar1DResult run_1d(const Bar1D& cfg, const std::function<double(double)>& sigma0,
                   const std::function<double(double)>& v0) {
  if (cfg.nN < sbp::SbpSet1D::kMinPoints) throw std::invalid_argument("bar needs at least 9 points");
  if (!(cfg.rho > 0) || !(cfg.c > 0) || !(cfg.length > 0)) throw std::invalid_argument("bar parameters must be positive");
  const double h = cfg.length / (cfg.nN - 1);
  const sbp::SbpSet1D op(cfg.nN, h);
  const double beta = 1.0 / (cfg.rho * cfg.c * cfg.c);
  const double dt = cfg.dt > 0 ? cfg.dt : 0.5 * h / cfg.c;
  const int nN = cfg.nN, nM = nN - 1;
  const auto aN = op.aN();
  const auto aM = op.aM();

  Bar1DResult r;
  r.dt = dt;
  r.h = h;
  r.sigma.resize(nN);
  r.v.resize(nM);
  for (int i = 0; i < nN; ++i) r.sigma[i] = sigma0(i * h);
  for (int i = 0; i < nM; ++i) r.v[i] = v0((i + 0.5) * h);
  std::vector<double> ds(nN), dv(nM);

  for (long n = 0; n < cfg.nSteps; ++n) {
    op.apply_dM(r.v, ds);
    const bool wantEnergy = cfg.energyEvery > 0 && n % cfg.energyEvery == 0;
    if (wantEnergy) {
      double e = 0;
      for (int i = 0; i < nM; ++i) e += aM[i] * cfg.rho * r.v[i] * r.v[i];
      for (int i = 0; i < nN; ++i) e += aN[i] * beta * r.sigma[i] * (r.sigma[i] + dt * ds[i] / beta);
      r.energy.t.push_back(n * dt);
      r.energy.v.push_back(0.5 * e);
    }
    for (int i = 0; i < nN; ++i) r.sigma[i] += dt * ds[i] / beta;
    op.apply_dN(r.sigma, dv);
    // Free ends: penalize the boundary stress.
    const double sL = r.sigma[0], sR = r.sigma[nN - 1];
    for (int i = 0; i < nM; ++i) dv[i] += (op.pL(i) * sL - op.pR(i) * sR) / aM[i];
    for (int i = 0; i < nM; ++i) r.v[i] += dt * dv[i] / cfg.rho;
  }
  return r;
}

}  // namespace elastodyne::sim
