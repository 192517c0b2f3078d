#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "elastodyne/interp1d.hpp"
#include "elastodyne/simulation.hpp"

namespace elastodyne::cli {

std::string version();

/// Sets the OpenMP thread count: `requested` if positive, else
/// ELASTODYNE_THREADS if set, else the runtime default. Returns the count in use.
int configure_threads(int requested);

/// "t,<column>" header then one row per sample, shortest round-trip decimals.
void write_series_csv(const std::filesystem::path& path, const sim::Series& s, const std::string& column);

struct RunArgs {
  std::filesystem::path config;
  double dtScale = 1.0;
  int threads = 0;
  std::string outputDir;  // overrides the config when set
  bool quiet = false;
};

/// Exit status: 0 ok, 1 run failed (manifest marked FAILED), 2 invalid config.
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);

/// Per-layer spacing, time step, point counts and cost ratios.
int cmd_plan(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

struct VerifyArgs {
  std::vector<interp::GridRatio> ratios;  // empty: all tabulated ratios
  std::string variant = "both";           // standard | alternative | both
  bool oracle = true;                     // dense-operator skew check
  /// Test fixture: perturbs one coefficient of the coarse-to-fine operator
  /// whose name() matches, before any check runs.
  std::string injectFault;
};

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  bool below = true;  // pass when value <= tolerance (else value > tolerance)
  bool pass() const { return below ? value <= tolerance : value > tolerance; }
};

/// Throws std::invalid_argument for an unknown variant or a ratio without
/// alternative stencils when only the alternative is requested.
std::vector<Check> verify_operators(const VerifyArgs& args);

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

}  // namespace elastodyne::cli
