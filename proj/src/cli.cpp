#include "elastodyne/cli.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "elastodyne/assembly.hpp"
#include "elastodyne/config.hpp"
#include "elastodyne/planner.hpp"
#include "elastodyne/sbp1d.hpp"

#ifndef ELASTODYNE_VERSION
#define ELASTODYNE_VERSION "0.0.0"
#endif

namespace elastodyne::cli {
namespace fs = std::filesystem;
using nlohmann::json;

std::string version() { return ELASTODYNE_VERSION; }

int configure_threads(int requested) {
  int n = requested;
  if (n <= 0)
    if (const char* env = std::getenv("ELASTODYNE_THREADS")) n = std::atoi(env);
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

void append_num(std::string& s, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  s.append(buf, r.ptr);
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char ch : s) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '_';
  return out;
}

}  // namespace

void write_series_csv(const fs::path& path, const sim::Series& s, const std::string& column) {
  std::string buf = "t," + column + "\n";
  buf.reserve(buf.size() + s.t.size() * 48);
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    append_num(buf, s.t[i]);
    buf += ',';
    append_num(buf, s.v[i]);
    buf += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << buf;
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
  const auto parsed = cfg::parse_config(args.config);
  if (!parsed.ok()) {
    err << "invalid config " << args.config.string() << ":\n";
    for (const std::string& e : parsed.errors) err << "  " << e << "\n";
    return 2;
  }
  cfg::SimulationConfig c = parsed.config;
  if (!args.outputDir.empty()) c.outputDir = args.outputDir;
  if (!(args.dtScale > 0)) {
    err << "--dt-scale must be positive\n";
    return 2;
  }
  const fs::path dir = c.outputDir;
  fs::create_directories(dir);

  json manifest;
  manifest["tool"] = "elastodyne";
  manifest["version"] = version();
  manifest["compiler"] = __VERSION__;
  manifest["started_utc"] = utc_now();
  manifest["config_path"] = fs::absolute(args.config).string();
  manifest["config"] = cfg::emit_config(c);
  manifest["dt_scale"] = args.dtScale;
  manifest["threads"] = configure_threads(args.threads);
  manifest["status"] = "RUNNING";

  auto write_manifest = [&] {
    std::ofstream f(dir / "manifest.json");
    f << manifest.dump(2) << "\n";
  };
  write_manifest();

  const auto t0 = std::chrono::steady_clock::now();
  int status = 0;
  try {
    const Model m = cfg::build_model(c);
    const double dt = cfg::time_step(c) * args.dtScale;
    sim::RunOptions o = cfg::run_options(c, m, dt);
    if (!o.snapshotDir.empty()) o.snapshotDir = dir / "snapshots";
    manifest["dt"] = dt;
    manifest["steps"] = o.nSteps;
    manifest["unknowns"] = m.unknowns();
    manifest["stability_bound_dt"] = sim::max_stable_dt(m);
    json layers = json::array();
    for (const Layer& l : m.layers)
      layers.push_back({{"dx", l.grid.h}, {"nx", l.grid.nx}, {"ny", l.grid.ny}, {"nz", l.grid.nzN},
                        {"z_top", l.grid.zTop}, {"cp_max", l.med.cpMax}, {"cs_min", l.med.csMin}});
    manifest["layers"] = layers;
    if (!args.quiet) {
      out << "model: " << m.layers.size() << " layers, " << m.unknowns() << " unknowns; dt = " << dt << " s, "
          << o.nSteps << " steps\n";
      o.progressEvery = std::max<long>(1, o.nSteps / 10);
      o.progress = [&](long n, double t) { out << "  step " << n << "/" << o.nSteps << "  t = " << t << " s\n" << std::flush; };
    }

    const sim::RunResult r = sim::run_simulation(m, o);

    json files = json::array();
    for (std::size_t i = 0; i < r.seismograms.size(); ++i) {
      const sim::ReceiverSpec& rs = o.receivers[i];
      const fs::path p = dir / ("seismogram_" + safe_name(rs.name) + ".csv");
      write_series_csv(p, r.seismograms[i], field_name(rs.field));
      files.push_back(p.filename().string());
    }
    if (o.energyEvery > 0) {
      write_series_csv(dir / "energy.csv", r.energy, "energy");
      files.push_back("energy.csv");
    }
    for (const sim::SnapshotFile& s : r.snapshots) files.push_back(fs::relative(s.path, dir).string());
    manifest["outputs"] = files;
    manifest["steps_done"] = r.stepsDone;

    const double tOff = sim::source_off_time(o.sources);
    if (o.energyEvery > 0 && !r.energy.t.empty() && r.energy.t.back() > tOff) {
      const double drift = sim::relative_drift(r.energy, tOff);
      manifest["energy_drift_after_source"] = drift;
      manifest["energy_drift_tolerance"] = c.energyDriftTol;
      manifest["energy_drift_ok"] = drift < c.energyDriftTol;
      if (!args.quiet) out << "relative energy drift after t = " << tOff << " s: " << drift << "\n";
    }
    if (r.aborted) {
      status = 1;
      manifest["status"] = "FAILED";
      manifest["abort_step"] = r.abortStep;
      manifest["message"] = r.message;
      err << "run failed: " << r.message << "\n";
    } else {
      manifest["status"] = "OK";
    }
  } catch (const std::exception& ex) {
    status = 1;
    manifest["status"] = "FAILED";
    manifest["message"] = ex.what();
    err << "run failed: " << ex.what() << "\n";
  }
  manifest["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest();
  if (!args.quiet) out << "status " << manifest["status"].get<std::string>() << "; outputs in " << dir.string() << "\n";
  return status;
}

int cmd_plan(const fs::path& config, std::ostream& out, std::ostream& err) {
  const auto parsed = cfg::parse_config(config);
  if (!parsed.ok()) {
    err << "invalid config " << config.string() << ":\n";
    for (const std::string& e : parsed.errors) err << "  " << e << "\n";
    return 2;
  }
  const cfg::SimulationConfig& c = parsed.config;
  try {
    const auto plans = cfg::layer_plans(c);
    double finest = INFINITY;
    for (const auto& p : plans) finest = std::min(finest, p.dx);
    const double uDx = c.uniformDx > 0 ? c.uniformDx : finest;
    const plan::CostReport r = plan::cost_ratios(plans, c.extentX, c.extentY, uDx, c.cCfl, c.cflDim);

    out << "layer    depth       dx    cs_min    cp_max        points\n";
    for (std::size_t i = 0; i < plans.size(); ++i)
      out << std::setw(5) << i << std::setw(9) << plans[i].depth << std::setw(9) << plans[i].dx << std::setw(10)
          << plans[i].cMin << std::setw(10) << plans[i].cMax << std::setw(14) << r.perLayerPoints[i] << "\n";
    out << "uniform reference: dx = " << uDx << ", " << r.uniformPoints << " points\n";
    out << "dt nonuniform " << r.dtNonuniform << " s, uniform " << r.dtUniform << " s\n";
    out << "ratios (uniform / nonuniform): spatial " << r.spatialRatio << ", temporal " << r.temporalRatio
        << ", total " << r.totalRatio << "\n\n";

    out << std::setprecision(17);
    for (std::size_t i = 0; i < plans.size(); ++i)
      out << "layer" << i << ".dx=" << plans[i].dx << "\nlayer" << i << ".points=" << r.perLayerPoints[i] << "\n";
    out << "uniform_dx=" << uDx << "\nuniform_points=" << r.uniformPoints << "\ndt_nonuniform=" << r.dtNonuniform
        << "\ndt_uniform=" << r.dtUniform << "\nspatial_ratio=" << r.spatialRatio
        << "\ntemporal_ratio=" << r.temporalRatio << "\ntotal_ratio=" << r.totalRatio << "\n";
    return 0;
  } catch (const std::exception& ex) {
    err << "plan failed: " << ex.what() << "\n";
    return 1;
  }
}

std::vector<Check> verify_operators(const VerifyArgs& args) {
  using namespace interp;
  if (args.variant != "standard" && args.variant != "alternative" && args.variant != "both")
    throw std::invalid_argument("variant must be standard, alternative or both");
  std::vector<GridRatio> ratios = args.ratios.empty() ? GridRatio::tabulated() : args.ratios;
  for (GridRatio& r : ratios) r = GridRatio::make(r.p, r.q);

  std::vector<Check> out;
  for (int nN : {9, 13, 21, 64}) {
    sbp::SbpSet1D op(nN, 1.0);
    if (args.injectFault == "sbp") op.perturb_dN(0, 0, 1e-3);
    out.push_back({"sbp identity nN=" + std::to_string(nN), op.sbp_identity_residual(), 1e-14});
    if (args.injectFault != "sbp")
      out.push_back({"sbp identity exact nN=" + std::to_string(nN),
                     std::abs(sbp::sbp_identity_residual_exact(nN).to_double()), 0.0});
  }

  std::vector<std::pair<GridRatio, Variant>> cases;
  for (const GridRatio& r : ratios) {
    const bool hasAlt = r.p == 2 && r.q == 3;
    if (args.variant != "alternative") cases.push_back({r, Variant::standard});
    if (args.variant != "standard" && hasAlt) cases.push_back({r, Variant::alternative});
    if (args.variant == "alternative" && !hasAlt && !r.conforming())
      throw std::invalid_argument("no alternative stencils for ratio " + r.str());
  }
  for (const auto& [r, v] : cases) {
    for (GridKind kind : {GridKind::N, GridKind::M}) {
      const int nC = 12 * r.p;
      const double dxF = 0.3 * r.p, dxC = 0.3 * r.q;
      InterpOp1D c2f = build_coarse_to_fine(r, kind, nC, v);
      if (!args.injectFault.empty() && c2f.name() == args.injectFault && !c2f.rows.empty() &&
          c2f.rows[1 % c2f.rows.size()].w.size() > 0)
        c2f.rows[1 % c2f.rows.size()].w.back() += 1e-3;
      const InterpOp1D f2c = derive_fine_to_coarse(c2f, dxF, dxC);
      out.push_back({"reciprocity " + c2f.name(),
                     reciprocity_residual(c2f, f2c, std::vector<double>(c2f.nOut, dxF), std::vector<double>(nC, dxC)),
                     1e-14});
      for (const InterpOp1D* op : {static_cast<const InterpOp1D*>(&c2f), &f2c}) {
        double worst = 0;
        for (int d = 0; d <= 2; ++d) worst = std::max(worst, check_poly_exactness(*op, d));
        out.push_back({"exactness deg<=2 " + op->name(), worst, 1e-13});
      }
    }
  }

  if (args.oracle) {
    for (const auto& [r, v] : cases) {
      if (r.conforming()) continue;
      for (bool fineAbove : {false, true}) {
        const Model m = oracle_stack(r, fineAbove, v);
        const std::string tag = r.str() + (v == Variant::alternative ? " (alternative)" : "") +
                                (fineAbove ? " fine above" : " coarse above");
        out.push_back({"dense skew HL+(HL)^T " + tag, skew_residual(assemble_operator(m)).relative(), 1e-12});
      }
    }
  }
  return out;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<Check> checks;
  try {
    checks = verify_operators(args);
  } catch (const std::exception& ex) {
    err << "verify: " << ex.what() << "\n";
    return 2;
  }
  int failed = 0;
  for (const Check& c : checks) {
    out << (c.pass() ? "PASS  " : "FAIL  ") << std::left << std::setw(52) << c.name << std::right << std::scientific
        << std::setprecision(3) << c.value << (c.below ? " <= " : " > ") << c.tolerance << std::defaultfloat << "\n";
    if (!c.pass()) {
      ++failed;
      err << "operator check failed: " << c.name << "\n";
    }
  }
  out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  return failed ? 1 : 0;
}

}  // namespace elastodyne::cli
