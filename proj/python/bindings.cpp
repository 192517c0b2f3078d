#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>

#include "elastodyne/cli.hpp"
#include "elastodyne/config.hpp"
#include "elastodyne/planner.hpp"
#include "elastodyne/sbp1d.hpp"
#include "elastodyne/simulation.hpp"

namespace py = pybind11;
using namespace elastodyne;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

struct Config {
  cfg::SimulationConfig c;
};

Config load_config(const std::filesystem::path& path) {
  const auto r = cfg::parse_config(path);
  if (!r.ok()) {
    std::string msg = "invalid config:";
    for (const auto& e : r.errors) msg += "\n  " + e;
    throw py::value_error(msg);
  }
  return {r.config};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Layered staggered-grid elastic wave solver";
  m.attr("__version__") = cli::version();

  py::class_<plan::LayerPlan>(m, "LayerPlan")
      .def(py::init([](double cMin, double cMax, double depth, double dx, double nppw, double fMax) {
             return plan::LayerPlan{cMin, cMax, depth, dx, nppw, fMax};
           }),
           py::arg("c_min"), py::arg("c_max"), py::arg("depth"), py::arg("dx"), py::arg("nppw") = 12.0,
           py::arg("f_max") = 25.0)
      .def_readwrite("c_min", &plan::LayerPlan::cMin)
      .def_readwrite("c_max", &plan::LayerPlan::cMax)
      .def_readwrite("depth", &plan::LayerPlan::depth)
      .def_readwrite("dx", &plan::LayerPlan::dx)
      .def_readwrite("nppw", &plan::LayerPlan::nppw)
      .def_readwrite("f_max", &plan::LayerPlan::fMax);

  py::class_<plan::CostReport>(m, "CostReport")
      .def_readonly("spatial_ratio", &plan::CostReport::spatialRatio)
      .def_readonly("temporal_ratio", &plan::CostReport::temporalRatio)
      .def_readonly("total_ratio", &plan::CostReport::totalRatio)
      .def_readonly("per_layer_points", &plan::CostReport::perLayerPoints)
      .def_readonly("uniform_points", &plan::CostReport::uniformPoints)
      .def_readonly("dt_nonuniform", &plan::CostReport::dtNonuniform)
      .def_readonly("dt_uniform", &plan::CostReport::dtUniform);

  m.def("plan_spacing", &plan::plan_spacing, py::arg("c_min"), py::arg("f_max"), py::arg("nppw"));
  m.def(
      "plan_timestep",
      [](const std::vector<plan::LayerPlan>& l, double cCfl, int dim) { return plan::plan_timestep(l, cCfl, dim); },
      py::arg("layers"), py::arg("c_cfl") = 0.8, py::arg("dim") = 3);
  m.def(
      "cost_ratios",
      [](const std::vector<plan::LayerPlan>& l, double ex, double ey, double uDx, double cCfl, int dim) {
        return plan::cost_ratios(l, ex, ey, uDx, cCfl, dim);
      },
      py::arg("layers"), py::arg("extent_x"), py::arg("extent_y"), py::arg("uniform_dx"), py::arg("c_cfl") = 0.8,
      py::arg("dim") = 3);

  m.def("sbp_identity_residual", [](int nN, double dx) { return sbp::SbpSet1D(nN, dx).sbp_identity_residual(); },
        py::arg("n"), py::arg("dx") = 1.0);
  m.def("ricker", &sim::ricker, py::arg("t"), py::arg("fc"), py::arg("t0"));

  py::class_<Config>(m, "Config")
      .def_property_readonly("name", [](const Config& c) { return c.c.name; })
      .def_property_readonly("extent", [](const Config& c) { return std::pair{c.c.extentX, c.c.extentY}; })
      .def_property_readonly("layer_count", [](const Config& c) { return c.c.layers.size(); })
      .def_property_readonly("spacings", [](const Config& c) { return cfg::layer_spacings(c.c); })
      .def_property_readonly("time_step", [](const Config& c) { return cfg::time_step(c.c); })
      .def_property_readonly("step_count", [](const Config& c) { return cfg::step_count(c.c, cfg::time_step(c.c)); })
      .def("layer_plans", [](const Config& c) { return cfg::layer_plans(c.c); })
      .def("emit", [](const Config& c) { return cfg::emit_config(c.c); });

  m.def("load_config", &load_config, py::arg("path"), "Parse and validate; raises ValueError listing every problem.");
  m.def(
      "config_errors",
      [](const std::string& text) { return cfg::parse_config_text(text).errors; }, py::arg("text"),
      "Validation errors of a config given as text (empty when valid).");

  m.def(
      "verify",
      [](const std::vector<std::string>& ratios, const std::string& variant, bool oracle) {
        cli::VerifyArgs a;
        for (const auto& r : ratios) a.ratios.push_back(interp::GridRatio::parse(r));
        a.variant = variant;
        a.oracle = oracle;
        py::list out;
        for (const cli::Check& c : cli::verify_operators(a)) out.append(py::make_tuple(c.name, c.value, c.tolerance, c.pass()));
        return out;
      },
      py::arg("ratios") = std::vector<std::string>{}, py::arg("variant") = "both", py::arg("oracle") = true,
      "Operator self-checks as (name, value, tolerance, passed) tuples.");

  m.def(
      "run",
      [](const std::filesystem::path& config, const std::string& outputDir, double dtScale, bool quiet) {
        cli::RunArgs a;
        a.config = config;
        a.outputDir = outputDir;
        a.dtScale = dtScale;
        a.quiet = quiet;
        std::ostringstream out, err;
        int status;
        {
          py::gil_scoped_release release;
          status = cli::cmd_run(a, out, err);
        }
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("config"), py::arg("output_dir") = "", py::arg("dt_scale") = 1.0, py::arg("quiet") = true,
      "Run a config; returns (status, stdout, stderr). Outputs go to the config's or the given directory.");

  m.def(
      "run_1d",
      [](int n, double length, double rho, double c, double dt, long steps, const std::function<double(double)>& sigma0,
         const std::function<double(double)>& v0, int energyEvery) {
        const auto r = sim::run_1d({n, length, rho, c, dt, steps, energyEvery}, sigma0, v0);
        py::dict d;
        d["sigma"] = to_numpy(r.sigma);
        d["v"] = to_numpy(r.v);
        d["energy_t"] = to_numpy(r.energy.t);
        d["energy"] = to_numpy(r.energy.v);
        d["dt"] = r.dt;
        d["h"] = r.h;
        return d;
      },
      py::arg("n"), py::arg("length"), py::arg("rho"), py::arg("c"), py::arg("dt"), py::arg("steps"),
      py::arg("sigma0"), py::arg("v0"), py::arg("energy_every") = 1,
      "Free-end bar; sigma0 is sampled at t = -dt/2 on the N grid, v0 at t = 0 on the M grid.");
}
