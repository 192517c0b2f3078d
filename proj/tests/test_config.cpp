#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "elastodyne/config.hpp"

using namespace elastodyne;
using namespace elastodyne::cfg;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = ELASTODYNE_SOURCE_DIR "/configs";

bool any_contains(const std::vector<std::string>& errs, const std::string& needle) {
  return std::any_of(errs.begin(), errs.end(), [&](const std::string& e) { return e.find(needle) != std::string::npos; });
}

// Two constant layers; the caller substitutes the second spacing and the CFL constant.
std::string two_layer_text(const std::string& dx2, const std::string& cfl) {
  return "[domain]\nextent_x = 60\nextent_y = 60\n[time]\nc_cfl = " + cfl +
         "\nsteps = 10\n[layer]\ndepth = 16\ndx = 2\nmedia = constant\ncp = 1800\ncs = 600\nrho = 2100\n"
         "[layer]\ndepth = 60\ndx = " +
         dx2 + "\nmedia = constant\ncp = 2400\ncs = 900\nrho = 2300\n";
}

fs::path temp_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("elastodyne_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("bundled layered desk config") {
  const ParseResult r = parse_config(kConfigs / "layered_desk.cfg");
  for (const auto& e : r.errors) INFO(e);
  REQUIRE(r.ok());
  const SimulationConfig& c = r.config;
  REQUIRE(c.layers.size() == 4);
  CHECK(layer_spacings(c) == std::vector<double>{1, 2, 3, 9});
  const auto grids = layer_grids(c);
  std::vector<std::string> ratios;
  for (std::size_t i = 1; i < grids.size(); ++i)
    ratios.push_back(interp::GridRatio::from_spacings(std::min(grids[i - 1].h, grids[i].h),
                                                      std::max(grids[i - 1].h, grids[i].h))
                         .str());
  CHECK(ratios == std::vector<std::string>{"1:2", "2:3", "1:3"});
  CHECK(grids[3].zTop == 48.0);
  CHECK(grids[3].nzN == 9);
  CHECK(time_step(c) == doctest::Approx(5.132e-4).epsilon(1e-3));
  CHECK(step_count(c, time_step(c)) == 2900);
}

TEST_CASE("unsupported ratio is reported") {
  const ParseResult r = parse_config_text(two_layer_text("5", "0.8"));
  CHECK_FALSE(r.ok());
  CHECK(any_contains(r.errors, "unsupported grid ratio"));
  CHECK(parse_config_text(two_layer_text("4", "0.8")).ok());
  CHECK(parse_config_text(two_layer_text("3", "0.8")).ok());
}

TEST_CASE("CFL constant above the limit cites 6/7") {
  const ParseResult r = parse_config_text(two_layer_text("4", "0.9"));
  REQUIRE_FALSE(r.ok());
  CHECK(any_contains(r.errors, "6/7"));
  CHECK(parse_config_text(two_layer_text("4", "0.857")).ok());
}

TEST_CASE("all problems are reported together") {
  const std::string text =
      "[domain]\nextent_x = abc\nextent_y = 60\ncolour = red\n[time]\nc_cfl = 0.9\nsteps = 1.5\n"
      "[layer]\ndepth = 16\ndx = 2\nmedia = marble\nnot a key value line\n[weather]\nrain = 1\n";
  const ParseResult r = parse_config_text(text);
  CHECK(r.errors.size() >= 6);
  CHECK(any_contains(r.errors, "extent_x: expected a number"));
  CHECK(any_contains(r.errors, "unknown key 'colour'"));
  CHECK(any_contains(r.errors, "steps: expected an integer"));
  CHECK(any_contains(r.errors, "unknown media 'marble'"));
  CHECK(any_contains(r.errors, "expected 'key = value'"));
  CHECK(any_contains(r.errors, "unknown section"));

  // Semantic errors are collected as well.
  const std::string bad =
      "[domain]\nextent_x = 61\nextent_y = 60\n[time]\nc_cfl = 0.95\nsteps = 5\nt_end = 1\n"
      "[layer]\ndepth = 16\ndx = 2\nmedia = constant\ncp = 1800\ncs = 600\nrho = 2100\n";
  const ParseResult s = parse_config_text(bad);
  CHECK(any_contains(s.errors, "6/7"));
  CHECK(any_contains(s.errors, "steps or t_end"));
  CHECK(any_contains(s.errors, "extent_x and extent_y") == false);
}

TEST_CASE("geometry errors") {
  auto errs = [](const std::string& t) { return parse_config_text(t).errors; };
  const std::string head = "[domain]\nextent_x = 60\nextent_y = 60\n[time]\nsteps = 1\n";
  const std::string mat = "media = constant\ncp = 1800\ncs = 600\nrho = 2100\n";
  CHECK(any_contains(errs(head + "[layer]\ndepth = 16\ndx = 7\n" + mat), "not a multiple of dx"));
  CHECK(any_contains(errs(head + "[layer]\ndepth = 17\ndx = 2\n" + mat), "depth"));
  CHECK(any_contains(errs(head), "at least one [layer]"));
  CHECK(any_contains(errs(head + "[layer]\ndepth = 16\ndx = 2\nmedia = constant\ncp = 1000\ncs = 900\nrho = 2100\n"),
                     "layer 0"));
  const std::string ok = head + "[layer]\ndepth = 16\ndx = 2\n" + mat;
  CHECK(parse_config_text(ok).ok());
  CHECK(any_contains(errs(ok + "[source]\nx = 10\ny = 10\nz = 30\n"), "source 0"));
  CHECK(any_contains(errs(ok + "[receiver]\nfield = vz\nlayer = 0\ni = 0\nj = 0\nk = 8\n"), "receiver r0"));
  CHECK(parse_config_text(ok + "[receiver]\nfield = vz\nlayer = 0\ni = 0\nj = 0\nk = 7\n").ok());
  CHECK(any_contains(errs(ok + "[receiver]\nfield = vq\nx = 1\ny = 1\nz = 1\n"), "unknown field"));
  CHECK(any_contains(errs(ok + "[source]\nx = 1\ny = 1\nz = 1\nlayer = 0\n"), "not both"));
}

TEST_CASE("missing model files are reported with their paths") {
  const std::string text =
      "[domain]\nextent_x = 60\nextent_y = 60\n[time]\nsteps = 1\n[layer]\ndepth = 16\ndx = 2\nmedia = model\n"
      "cp_file = nowhere_cp.f32\ncs_file = nowhere_cs.f32\nrho_file = nowhere_rho.f32\n";
  const ParseResult r = parse_config_text(text, "/nonexistent");
  CHECK(r.errors.size() == 3);
  CHECK(any_contains(r.errors, "nowhere_rho.f32"));
}

TEST_CASE("emit then parse reproduces the config") {
  for (const char* name : {"layered_desk.cfg", "layered_full.cfg", "overthrust_full.cfg", "single_layer.cfg"}) {
    INFO(name);
    const ParseResult a = parse_config(kConfigs / name);
    REQUIRE(a.ok());
    const ParseResult b = parse_config_text(emit_config(a.config), a.config.baseDir);
    for (const auto& e : b.errors) INFO(e);
    REQUIRE(b.ok());
    CHECK(b.config == a.config);
    CHECK(emit_config(b.config) == emit_config(a.config));
  }

  SimulationConfig c;
  c.name = "roundtrip";
  c.extentX = 30;
  c.extentY = 12;
  c.variant = interp::Variant::alternative;
  c.cCfl = 0.1 + 0.2;  // not exactly representable in short decimal form
  c.tEnd = 1.0 / 3.0;
  c.dt = 1e-4 / 3.0;
  LayerSpec z;
  z.depth = 16;
  z.dx = 2;
  z.media.kind = MediaKind::zones;
  z.media.zones = {{0, {1800, 600, 2100}}, {7.25, {2000, 700, 2150.5}}};
  c.layers.push_back(z);
  LayerSpec l;
  l.depth = 24;
  l.dx = 3;
  l.nppw = 14.5;
  l.media.kind = MediaKind::range;
  l.media.csMin = 900;
  l.media.cpMax = 2400;
  c.layers.push_back(l);
  SourceConfig s;
  s.at = {true, 0, 0, 0, 1, 2, 3, 4};
  s.fc = 12.5;
  s.t0 = 0.2;
  s.amplitude = -2.5;
  c.sources.push_back(s);
  ReceiverConfig rc;
  rc.name = "a";
  rc.field = FieldId::sxz;
  rc.at.x = 0.1;
  rc.at.y = 0.7;
  rc.at.z = 16;
  c.receivers.push_back(rc);
  c.snapshotTimes = {0.1, 0.25};
  c.snapshotY = 6;
  c.energyEvery = 3;
  c.watchdogEvery = 50;
  c.outputDir = "somewhere/else";
  c.energyDriftTol = 2.5e-10;
  const ParseResult back = parse_config_text(emit_config(c));
  CHECK(back.config == c);
}

TEST_CASE("positions snap onto the requested sub-grid") {
  const ParseResult r = parse_config(kConfigs / "layered_desk.cfg");
  REQUIRE(r.ok());
  const Model m = build_model(r.config);
  REQUIRE(m.layers.size() == 4);

  const sim::ReceiverSpec src = resolve(m, FieldId::sxx, {false, 54, 54, 5});
  CHECK(src.layer == 0);
  CHECK(src.i == 54);
  CHECK(src.k == 5);
  const sim::ReceiverSpec rec = resolve(m, FieldId::vz, {false, 60, 54, 4.5});
  CHECK(rec.layer == 0);
  CHECK(rec.k == 4);
  CHECK(m.layers[0].grid.z_at(Stagger::M, rec.k) == 4.5);

  // On an interface the deeper layer owns the point.
  const sim::ReceiverSpec on = resolve(m, FieldId::szz, {false, 54, 54, 8});
  CHECK(on.layer == 1);
  CHECK(on.k == 0);
  CHECK(on.i == 27);
  // Bottom of the model belongs to the last layer.
  CHECK(resolve(m, FieldId::szz, {false, 0, 0, 120}).k == 8);
  // Staggered in x: vx nodes sit at (i + 1/2) h.
  CHECK(resolve(m, FieldId::vx, {false, 100.5, 0, 30}).i == 33);

  CHECK_THROWS_AS(resolve(m, FieldId::vz, {false, 54, 54, 121}), std::out_of_range);
  CHECK_THROWS_AS(resolve(m, FieldId::vz, {false, 108, 54, 1}), std::out_of_range);
  CHECK_THROWS_AS(resolve(m, FieldId::vz, {true, 0, 0, 0, 0, 0, 0, 8}), std::out_of_range);

  const sim::RunOptions o = run_options(r.config, m, time_step(r.config));
  CHECK(o.nSteps == 2900);
  REQUIRE(o.sources.size() == 1);
  CHECK(o.sources[0].wavelet.t0 == doctest::Approx(0.15));
  REQUIRE(o.receivers.size() == 2);
  CHECK(o.receivers[1].name == "far");
  CHECK(o.receivers[1].i == 84);
  CHECK(o.snapshotDir == fs::path("out_layered_desk") / "snapshots");
}

TEST_CASE("t_end sets the step count") {
  ParseResult r = parse_config(kConfigs / "single_layer.cfg");
  REQUIRE(r.ok());
  r.config.nSteps = 0;
  r.config.tEnd = 0.1;
  CHECK(step_count(r.config, 0.01) == 10);
  CHECK(step_count(r.config, 0.03) == 4);
  r.config.dt = 2e-3;
  CHECK(time_step(r.config) == 2e-3);
}

TEST_CASE("range media plans but does not build") {
  const ParseResult r = parse_config(kConfigs / "layered_full.cfg");
  REQUIRE(r.ok());
  CHECK(layer_spacings(r.config) == std::vector<double>{1, 2, 3, 9});
  CHECK_THROWS_AS(build_model(r.config), std::invalid_argument);
}

TEST_CASE("model files, given or synthesized") {
  const fs::path dir = temp_dir("model_media");
  medium::ParameterGrid cp;
  cp.dims = {13, 13, 9};
  cp.spacing = 2;
  cp.kind = medium::ScalarKind::cp;
  cp.values.assign(13 * 13 * 9, 2000.f);
  medium::write_model(dir / "cp.f32", cp);
  auto [cs, rho] = medium::synthesize_cs_rho(cp, 2.0, 2.0, 2100, 2100);
  medium::write_model(dir / "cs.f32", cs);
  medium::write_model(dir / "rho.f32", rho);

  const std::string head = "[domain]\nextent_x = 24\nextent_y = 24\n[time]\nsteps = 1\nf_max = 10\nnppw = 50\n";
  {
    std::ofstream f(dir / "given.cfg");
    f << head << "[layer]\ndepth = 16\nmedia = model\ncp_file = cp.f32\ncs_file = cs.f32\nrho_file = rho.f32\n";
  }
  {
    std::ofstream f(dir / "synth.cfg");
    f << head << "[layer]\ndepth = 16\nmedia = model\ncp_file = cp.f32\nsynthesize = 2 2 2100 2100\n";
  }
  for (const char* name : {"given.cfg", "synth.cfg"}) {
    INFO(name);
    const ParseResult r = parse_config(dir / name);
    for (const auto& e : r.errors) INFO(e);
    REQUIRE(r.ok());
    const auto [lo, hi] = speed_range(r.config, 0);
    CHECK(lo == 1000.0);
    CHECK(hi == 2000.0);
    CHECK(layer_spacings(r.config)[0] == 2.0);  // 1000 / (10 * 50)
    const Model m = build_model(r.config);
    CHECK(m.layers[0].med.cpMax == doctest::Approx(2000.0));
    CHECK(m.layers[0].med.bz(3, 3, 3) == doctest::Approx(1.0 / 2100));
  }
}

TEST_CASE("syntax details") {
  const ParseResult r = parse_config_text("name = x\n[domain\n");
  CHECK(any_contains(r.errors, "outside of any section"));
  CHECK(any_contains(r.errors, "malformed section header"));
  const ParseResult d = parse_config_text("[domain]\n[domain]\n");
  CHECK(any_contains(d.errors, "only once"));
  CHECK(any_contains(parse_config("/nonexistent/x.cfg").errors, "cannot open"));
}
