#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "elastodyne/grid.hpp"
#include "elastodyne/interp1d.hpp"
#include "elastodyne/medium.hpp"
#include "elastodyne/model.hpp"
#include "elastodyne/planner.hpp"
#include "elastodyne/simulation.hpp"

namespace elastodyne::cfg {

enum class MediaKind { constant, zones, model, range };
const char* to_string(MediaKind k);

struct MediaSpec {
  MediaKind kind = MediaKind::constant;
  medium::Material constant;         // constant
  std::vector<medium::Zone> zones;   // zones (tops are absolute depths)
  std::string cpFile, csFile, rhoFile;  // model; cs/rho may instead be synthesized
  bool synthesize = false;
  double ratioTop = 0, ratioBottom = 0, rhoTop = 0, rhoBottom = 0;
  double csMin = 0, cpMax = 0;  // range (planning only)
  bool operator==(const MediaSpec&) const = default;
};

struct LayerSpec {
  double depth = 0;
  double dx = 0;    // 0 = planned from the slowest shear speed
  double nppw = 0;  // 0 = the global value
  MediaSpec media;
  bool operator==(const LayerSpec&) const = default;
};

/// A node given either by physical coordinates (z absolute depth; the layer
/// is found from z, a point on an interface goes to the deeper layer) or by
/// layer and sub-grid indices.
struct Position {
  bool byIndex = false;
  double x = 0, y = 0, z = 0;
  int layer = 0, i = 0, j = 0, k = 0;
  bool operator==(const Position&) const = default;
};

struct SourceConfig {
  Position at;
  double fc = 10;
  double t0 = 0;  // 0 = 1.5 / fc
  double amplitude = 1;
  bool operator==(const SourceConfig&) const = default;
};

struct ReceiverConfig {
  std::string name;
  FieldId field = FieldId::vz;
  Position at;
  bool operator==(const ReceiverConfig&) const = default;
};

struct SimulationConfig {
  std::string name;
  double extentX = 0, extentY = 0;
  interp::Variant variant = interp::Variant::standard;
  std::vector<LayerSpec> layers;  // top to bottom

  double fMax = 25;
  double nppw = 12;
  double cCfl = 0.8;
  int cflDim = 3;     // dt uses 1/sqrt(cflDim)
  double dt = 0;      // > 0 overrides the planned step
  long nSteps = 0;    // either nSteps or tEnd
  double tEnd = 0;
  double uniformDx = 0;  // reference spacing for plan ratios; 0 = finest layer

  std::vector<SourceConfig> sources;
  std::vector<ReceiverConfig> receivers;

  std::string outputDir = "output";
  int energyEvery = 1;
  int watchdogEvery = 100;
  std::vector<double> snapshotTimes;
  double snapshotY = -1;  // < 0: middle of the domain

  double energyDriftTol = 1e-9;

  /// Directory relative file names are resolved against (not serialized).
  std::filesystem::path baseDir;

  bool operator==(const SimulationConfig&) const = default;
};

struct ParseResult {
  SimulationConfig config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

/// Parses and validates; every problem found is reported, not just the first.
ParseResult parse_config(const std::filesystem::path& path);
ParseResult parse_config_text(const std::string& text, const std::filesystem::path& baseDir = {});

/// Canonical text form; parse_config_text(emit_config(c)) reproduces c.
std::string emit_config(const SimulationConfig& c);

/// Semantic checks (ratios, CFL, geometry, files, positions).
std::vector<std::string> validate(const SimulationConfig& c);

/// Slowest shear and fastest compressional speed of layer `index`'s media
/// over its depth range.
std::pair<double, double> speed_range(const SimulationConfig& c, std::size_t index);

/// Spacing of each layer (explicit or planned).
std::vector<double> layer_spacings(const SimulationConfig& c);

std::vector<plan::LayerPlan> layer_plans(const SimulationConfig& c);

/// dt actually used: the override if set, else the planned step.
double time_step(const SimulationConfig& c);
long step_count(const SimulationConfig& c, double dt);

std::vector<LayerGrid> layer_grids(const SimulationConfig& c);
Model build_model(const SimulationConfig& c);

/// Nearest node of the sub-grid of `f`; throws std::out_of_range outside the model.
sim::ReceiverSpec resolve(const Model& m, FieldId f, const Position& p);

sim::RunOptions run_options(const SimulationConfig& c, const Model& m, double dt);

}  // namespace elastodyne::cfg
