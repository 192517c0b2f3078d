#include <CLI11.hpp>
#include <iostream>

#include "elastodyne/cli.hpp"

using namespace elastodyne;

int main(int argc, char** argv) {
  CLI::App app{"Layered staggered-grid elastic wave solver with nonconforming interfaces"};
  app.set_version_flag("--version", cli::version());
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (default: ELASTODYNE_THREADS, then the runtime default)");

  cli::RunArgs run;
  auto* runCmd = app.add_subcommand("run", "Run a simulation and write seismograms, energy, snapshots and a manifest");
  runCmd->add_option("config", run.config, "Config file")->required()->check(CLI::ExistingFile);
  runCmd->add_option("--dt-scale", run.dtScale, "Multiply the planned time step");
  runCmd->add_option("--output-dir", run.outputDir, "Override the config's output directory");
  runCmd->add_option("--threads", threads, "OpenMP threads");
  runCmd->add_flag("--quiet", run.quiet, "No progress output");

  std::string planConfig;
  auto* planCmd = app.add_subcommand("plan", "Print per-layer spacing, time step, point counts and cost ratios");
  planCmd->add_option("config", planConfig, "Config file")->required()->check(CLI::ExistingFile);

  cli::VerifyArgs verify;
  std::vector<std::string> ratios;
  bool noOracle = false;
  auto* verifyCmd = app.add_subcommand("verify", "Check the SBP identity, interpolation pairs and interface energy balance");
  verifyCmd->add_option("--ratios", ratios, "Ratios p:q to check (default: all tabulated)")->delimiter(',');
  verifyCmd->add_option("--variant", verify.variant, "standard, alternative or both")
      ->check(CLI::IsMember({"standard", "alternative", "both"}));
  verifyCmd->add_flag("--no-oracle", noOracle, "Skip the dense-operator check");
  verifyCmd->add_option("--inject-fault", verify.injectFault,
                        "Perturb one coefficient of the named operator (e.g. \"N 1:2 coarse-to-fine\", or \"sbp\")");
  verifyCmd->add_option("--threads", threads, "OpenMP threads");

  CLI11_PARSE(app, argc, argv);
  cli::configure_threads(threads);

  try {
    if (*runCmd) {
      run.threads = threads;
      return cli::cmd_run(run, std::cout, std::cerr);
    }
    if (*planCmd) return cli::cmd_plan(planConfig, std::cout, std::cerr);
    if (*verifyCmd) {
      for (const std::string& r : ratios) verify.ratios.push_back(interp::GridRatio::parse(r));
      verify.oracle = !noOracle;
      return cli::cmd_verify(verify, std::cout, std::cerr);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
