#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "elastodyne/model.hpp"

namespace elastodyne::sim {

/// (1 - 2 pi^2 fc^2 (t-t0)^2) exp(-pi^2 fc^2 (t-t0)^2). Throws for fc <= 0.
double ricker(double t, double fc, double t0);

struct Ricker {
  double fc = 10.0;
  double t0 = 0.15;
  double amplitude = 1.0;

  static Ricker centered(double fc, double amplitude = 1.0) { return {fc, 1.5 / fc, amplitude}; }
  /// The wavelet is treated as exactly zero from here on.
  double cutoff() const { return t0 + 3.0 / fc; }
  double operator()(double t) const { return t >= cutoff() ? 0.0 : amplitude * ricker(t, fc, t0); }
};

/// Compressional point source on the normal-stress sub-grid of one layer.
struct SourceSpec {
  int layer = 0;
  int i = 0, j = 0, k = 0;
  Ricker wavelet;
};

struct ReceiverSpec {
  std::string name;
  int layer = 0;
  FieldId field = FieldId::vz;
  int i = 0, j = 0, k = 0;
};

struct Series {
  std::vector<double> t, v;
};

/// Throws std::out_of_range if the node is not on the layer's sub-grid.
void check_node(const Model& m, int layer, FieldId f, int i, int j, int k);

/// Largest stable dt for the model's grids: (6/7) min(h / cpMax) / sqrt(3).
double max_stable_dt(const Model& m);

/// Staggered leapfrog over a layered model. Velocities live at t_n = n dt,
/// stresses at t_{n+1/2}. A negative dt runs the exact inverse step.
class Simulator {
 public:
  Simulator(const Model& m, double dt);

  void add_source(const SourceSpec& s);
  double dt() const { return dt_; }
  void set_dt(double dt) { dt_ = dt; }
  long steps() const { return n_; }
  /// Time level of the velocities.
  double time() const { return n_ * dt_abs_(); }
  StackState& state() { return s_; }
  const StackState& state() const { return s_; }
  const Model& model() const { return m_; }

  /// Advances one step. When `energy` is set it receives E at the velocity
  /// level the step started from (forward steps only).
  void step(double* energy = nullptr);

  /// All fields finite?
  bool finite() const;

 private:
  double dt_abs_() const { return dt_ < 0 ? -dt_ : dt_; }
  void stress_update(double* energy);
  void velocity_update();

  const Model& m_;
  double dt_;
  long n_ = 0;
  StackState s_, rhs_;
  std::vector<SourceSpec> sources_;
};

/// E at the velocity level from v^n, sigma^{n-1/2} and sigma^{n+1/2}; the
/// velocity is taken from `v`, the stresses from `older` and `newer`.
double staggered_energy(const Model& m, const StackState& v, const StackState& older, const StackState& newer);

struct SnapshotRequest {
  double time = 0;
};

struct SnapshotFile {
  int layer = 0;
  double time = 0;
  std::filesystem::path path;
};

struct RunOptions {
  double dt = 0;
  long nSteps = 0;
  std::vector<SourceSpec> sources;
  std::vector<ReceiverSpec> receivers;
  int energyEvery = 1;  // 0 disables the energy trace
  int watchdogEvery = 100;
  std::vector<double> snapshotTimes;
  double snapshotY = 0;  // vz xz-slices through the y row nearest to this
  std::filesystem::path snapshotDir;
  /// Called every `progressEvery` steps if set.
  std::function<void(long step, double t)> progress;
  long progressEvery = 0;
};

struct RunResult {
  std::vector<Series> seismograms;  // one per receiver
  Series energy;
  std::vector<SnapshotFile> snapshots;
  long stepsDone = 0;
  bool aborted = false;
  long abortStep = -1;
  std::string message;
};

/// (max - min) / max|E| over the samples with t >= tFrom; 0 if there are none.
double relative_drift(const Series& energy, double tFrom);

/// Latest wavelet cutoff over the sources (0 without sources).
double source_off_time(const std::vector<SourceSpec>& sources);

/// Runs the leapfrog for opts.nSteps. Instability detected by the watchdog
/// ends the run early with `aborted` set; recorded data up to that point is kept.
RunResult run_simulation(const Model& m, const RunOptions& opts);

/// Writes the vz xz-slice of every layer at row `j` of that layer (raw
/// float32, x fastest) with a `.hdr` sidecar. Returns the raw paths.
std::vector<SnapshotFile> write_vz_snapshots(const Model& m, const StackState& s, double y, double t,
                                             const std::filesystem::path& dir);

// 1D bar: rho v_t = sigma_x, beta sigma_t = v_x, sigma on the N grid, v on
// the M grid, free ends imposed weakly on the velocity equation.
struct Bar1D {
  int nN = 9;
  double length = 1.0;
  double rho = 1.0;
  double c = 1.0;
  double dt = 0;  // 0 = 0.5 h / c
  long nSteps = 0;
  int energyEvery = 1;
};

struct Bar1DResult {
  std::vector<double> sigma;  // at t_{n+1/2} after the last step
  std::vector<double> v;      // at t_n
  Series energy;
  double dt = 0;
  double h = 0;
};

/// sigma0 gives sigma at t = -dt/2 on the N grid, v0 gives v at t = 0 on the M grid.
Bar1DResult run_1d(const Bar1D& cfg, const std::function<double(double)>& sigma0,
                   const std::function<double(double)>& v0);

}  // namespace elastodyne::sim
