#include "elastodyne/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace elastodyne::cfg {
namespace fs = std::filesystem;

const char* to_string(MediaKind k) {
  switch (k) {
    case MediaKind::constant: return "constant";
    case MediaKind::zones: return "zones";
    case MediaKind::model: return "model";
    case MediaKind::range: return "range";
  }
  return "?";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool to_double(std::string_view s, double& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(out);
}

template <class Int>
bool to_int(std::string_view s, Int& out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : v) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Entry {
  std::string key, value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;
};

/// Reads typed values out of one section, recording problems with line numbers.
class Reader {
 public:
  Reader(const Section& s, std::vector<std::string>& errors) : s_(s), errors_(errors) {}

  bool has(const std::string& key) const {
    return std::any_of(s_.entries.begin(), s_.entries.end(), [&](const Entry& e) { return e.key == key; });
  }
  const Entry* find(const std::string& key) {
    used_.insert(key);
    const Entry* hit = nullptr;
    for (const Entry& e : s_.entries)
      if (e.key == key) {
        if (hit && key != "zone") error(e.line, "duplicate key '" + key + "'");
        hit = &e;
      }
    return hit;
  }
  std::vector<const Entry*> all(const std::string& key) {
    used_.insert(key);
    std::vector<const Entry*> out;
    for (const Entry& e : s_.entries)
      if (e.key == key) out.push_back(&e);
    return out;
  }
  void real(const std::string& key, double& out) {
    if (const Entry* e = find(key))
      if (!to_double(e->value, out)) error(e->line, key + ": expected a number, got '" + e->value + "'");
  }
  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const Entry* e = find(key))
      if (!to_int(e->value, out)) error(e->line, key + ": expected an integer, got '" + e->value + "'");
  }
  void text(const std::string& key, std::string& out) {
    if (const Entry* e = find(key)) out = e->value;
  }
  void error(int line, const std::string& msg) {
    errors_.push_back("line " + std::to_string(line) + " [" + s_.name + "]: " + msg);
  }
  void finish() {
    for (const Entry& e : s_.entries)
      if (!used_.count(e.key)) error(e.line, "unknown key '" + e.key + "'");
  }

 private:
  const Section& s_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

void read_position(Reader& r, Position& p, int line) {
  const bool idx = r.has("layer") || r.has("i") || r.has("j") || r.has("k");
  const bool phys = r.has("x") || r.has("y") || r.has("z");
  if (idx && phys) r.error(line, "give either x/y/z or layer/i/j/k, not both");
  if (!idx && !phys) r.error(line, "missing position (x/y/z or layer/i/j/k)");
  p.byIndex = idx;
  if (idx) {
    for (const char* key : {"layer", "i", "j", "k"})
      if (!r.has(key)) r.error(line, std::string("missing '") + key + "'");
    r.integer("layer", p.layer);
    r.integer("i", p.i);
    r.integer("j", p.j);
    r.integer("k", p.k);
  } else {
    for (const char* key : {"x", "y", "z"})
      if (!r.has(key)) r.error(line, std::string("missing '") + key + "'");
    r.real("x", p.x);
    r.real("y", p.y);
    r.real("z", p.z);
  }
}

void read_layer(Reader& r, LayerSpec& l, int line) {
  r.real("depth", l.depth);
  if (const Entry* e = r.find("dx"))
    if (e->value != "auto" && !to_double(e->value, l.dx)) r.error(e->line, "dx: expected a number or 'auto'");
  r.real("nppw", l.nppw);
  std::string kind;
  r.text("media", kind);
  MediaSpec& m = l.media;
  if (kind == "constant") {
    m.kind = MediaKind::constant;
    r.real("cp", m.constant.cp);
    r.real("cs", m.constant.cs);
    r.real("rho", m.constant.rho);
  } else if (kind == "zones") {
    m.kind = MediaKind::zones;
    for (const Entry* e : r.all("zone")) {
      const auto parts = split_list(e->value);
      medium::Zone z;
      if (parts.size() != 4 || !to_double(parts[0], z.top) || !to_double(parts[1], z.m.cp) ||
          !to_double(parts[2], z.m.cs) || !to_double(parts[3], z.m.rho))
        r.error(e->line, "zone: expected 'top cp cs rho'");
      m.zones.push_back(z);
    }
  } else if (kind == "model") {
    m.kind = MediaKind::model;
    r.text("cp_file", m.cpFile);
    r.text("cs_file", m.csFile);
    r.text("rho_file", m.rhoFile);
    if (const Entry* e = r.find("synthesize")) {
      const auto parts = split_list(e->value);
      m.synthesize = true;
      if (parts.size() != 4 || !to_double(parts[0], m.ratioTop) || !to_double(parts[1], m.ratioBottom) ||
          !to_double(parts[2], m.rhoTop) || !to_double(parts[3], m.rhoBottom))
        r.error(e->line, "synthesize: expected 'ratio_top ratio_bottom rho_top rho_bottom'");
    }
  } else if (kind == "range") {
    m.kind = MediaKind::range;
    r.real("cs_min", m.csMin);
    r.real("cp_max", m.cpMax);
  } else if (kind.empty()) {
    r.error(line, "missing 'media' (constant, zones, model or range)");
  } else {
    r.error(line, "unknown media '" + kind + "'");
  }
}

bool file_ok(const SimulationConfig& c, const std::string& f) {
  const fs::path p = c.baseDir / f;
  return fs::exists(p) && fs::exists(medium::sidecar_path(p));
}

fs::path resolve_path(const SimulationConfig& c, const std::string& f) { return c.baseDir / f; }

struct LoadedMedia {
  medium::ParameterGrid cp, cs, rho;
};

LoadedMedia load_media(const SimulationConfig& c, const MediaSpec& m) {
  LoadedMedia out;
  out.cp = medium::load_model(resolve_path(c, m.cpFile));
  if (m.synthesize) {
    auto [cs, rho] = medium::synthesize_cs_rho(out.cp, m.ratioTop, m.ratioBottom, m.rhoTop, m.rhoBottom);
    out.cs = std::move(cs);
    out.rho = std::move(rho);
  } else {
    out.cs = medium::load_model(resolve_path(c, m.csFile));
    out.rho = medium::load_model(resolve_path(c, m.rhoFile));
  }
  return out;
}

double layer_top(const SimulationConfig& c, std::size_t index) {
  double z = 0;
  for (std::size_t i = 0; i < index; ++i) z += c.layers[i].depth;
  return z;
}

}  // namespace

ParseResult parse_config_text(const std::string& text, const fs::path& baseDir) {
  ParseResult res;
  SimulationConfig& c = res.config;
  c.baseDir = baseDir;

  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int lineNo = 0;
  while (std::getline(in, raw)) {
    ++lineNo;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        res.errors.push_back("line " + std::to_string(lineNo) + ": malformed section header");
        continue;
      }
      sections.push_back({trim(line.substr(1, line.size() - 2)), lineNo, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      res.errors.push_back("line " + std::to_string(lineNo) + ": expected 'key = value'");
      continue;
    }
    if (sections.empty()) {
      res.errors.push_back("line " + std::to_string(lineNo) + ": key outside of any section");
      continue;
    }
    sections.back().entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineNo});
  }

  std::set<std::string> seenSingle;
  for (const Section& s : sections) {
    Reader r(s, res.errors);
    const bool repeatable = s.name == "layer" || s.name == "source" || s.name == "receiver";
    if (!repeatable && !seenSingle.insert(s.name).second) r.error(s.line, "section may appear only once");
    if (s.name == "domain") {
      r.text("name", c.name);
      r.real("extent_x", c.extentX);
      r.real("extent_y", c.extentY);
      if (const Entry* e = r.find("variant")) {
        if (e->value == "standard") c.variant = interp::Variant::standard;
        else if (e->value == "alternative") c.variant = interp::Variant::alternative;
        else r.error(e->line, "variant must be 'standard' or 'alternative'");
      }
    } else if (s.name == "time") {
      r.real("f_max", c.fMax);
      r.real("nppw", c.nppw);
      r.real("c_cfl", c.cCfl);
      r.integer("cfl_dim", c.cflDim);
      r.real("dt", c.dt);
      r.integer("steps", c.nSteps);
      r.real("t_end", c.tEnd);
      r.real("uniform_dx", c.uniformDx);
    } else if (s.name == "layer") {
      LayerSpec l;
      read_layer(r, l, s.line);
      c.layers.push_back(l);
    } else if (s.name == "source") {
      SourceConfig src;
      read_position(r, src.at, s.line);
      r.real("fc", src.fc);
      r.real("t0", src.t0);
      r.real("amplitude", src.amplitude);
      c.sources.push_back(src);
    } else if (s.name == "receiver") {
      ReceiverConfig rc;
      r.text("name", rc.name);
      if (const Entry* e = r.find("field")) {
        try {
          rc.field = parse_field(e->value);
        } catch (const std::invalid_argument&) {
          r.error(e->line, "unknown field '" + e->value + "'");
        }
      }
      read_position(r, rc.at, s.line);
      if (rc.name.empty()) rc.name = "r" + std::to_string(c.receivers.size());
      c.receivers.push_back(rc);
    } else if (s.name == "output") {
      r.text("dir", c.outputDir);
      r.integer("energy_every", c.energyEvery);
      r.integer("watchdog_every", c.watchdogEvery);
      if (const Entry* e = r.find("snapshot_times"))
        for (const std::string& t : split_list(e->value)) {
          double v;
          if (to_double(t, v)) c.snapshotTimes.push_back(v);
          else r.error(e->line, "snapshot_times: bad number '" + t + "'");
        }
      r.real("snapshot_y", c.snapshotY);
    } else if (s.name == "tolerances") {
      r.real("energy_drift", c.energyDriftTol);
    } else {
      r.error(s.line, "unknown section");
      continue;
    }
    r.finish();
  }

  if (res.errors.empty()) res.errors = validate(c);
  return res;
}

ParseResult parse_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) {
    ParseResult r;
    r.errors.push_back("cannot open config file " + path.string());
    return r;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

std::string emit_config(const SimulationConfig& c) {
  std::ostringstream o;
  auto pos = [&](const Position& p) {
    if (p.byIndex)
      o << "layer = " << p.layer << "\ni = " << p.i << "\nj = " << p.j << "\nk = " << p.k << "\n";
    else
      o << "x = " << num(p.x) << "\ny = " << num(p.y) << "\nz = " << num(p.z) << "\n";
  };
  o << "[domain]\n";
  if (!c.name.empty()) o << "name = " << c.name << "\n";
  o << "extent_x = " << num(c.extentX) << "\nextent_y = " << num(c.extentY) << "\nvariant = " << interp::to_string(c.variant)
    << "\n\n[time]\nf_max = " << num(c.fMax) << "\nnppw = " << num(c.nppw) << "\nc_cfl = " << num(c.cCfl)
    << "\ncfl_dim = " << c.cflDim << "\n";
  if (c.dt > 0) o << "dt = " << num(c.dt) << "\n";
  if (c.nSteps > 0) o << "steps = " << c.nSteps << "\n";
  if (c.tEnd > 0) o << "t_end = " << num(c.tEnd) << "\n";
  if (c.uniformDx > 0) o << "uniform_dx = " << num(c.uniformDx) << "\n";
  for (const LayerSpec& l : c.layers) {
    o << "\n[layer]\ndepth = " << num(l.depth) << "\ndx = " << (l.dx > 0 ? num(l.dx) : "auto") << "\n";
    if (l.nppw > 0) o << "nppw = " << num(l.nppw) << "\n";
    const MediaSpec& m = l.media;
    o << "media = " << to_string(m.kind) << "\n";
    switch (m.kind) {
      case MediaKind::constant:
        o << "cp = " << num(m.constant.cp) << "\ncs = " << num(m.constant.cs) << "\nrho = " << num(m.constant.rho) << "\n";
        break;
      case MediaKind::zones:
        for (const medium::Zone& z : m.zones)
          o << "zone = " << num(z.top) << " " << num(z.m.cp) << " " << num(z.m.cs) << " " << num(z.m.rho) << "\n";
        break;
      case MediaKind::model:
        o << "cp_file = " << m.cpFile << "\n";
        if (m.synthesize)
          o << "synthesize = " << num(m.ratioTop) << " " << num(m.ratioBottom) << " " << num(m.rhoTop) << " "
            << num(m.rhoBottom) << "\n";
        else
          o << "cs_file = " << m.csFile << "\nrho_file = " << m.rhoFile << "\n";
        break;
      case MediaKind::range:
        o << "cs_min = " << num(m.csMin) << "\ncp_max = " << num(m.cpMax) << "\n";
        break;
    }
  }
  for (const SourceConfig& s : c.sources) {
    o << "\n[source]\n";
    pos(s.at);
    o << "fc = " << num(s.fc) << "\nt0 = " << num(s.t0) << "\namplitude = " << num(s.amplitude) << "\n";
  }
  for (const ReceiverConfig& r : c.receivers) {
    o << "\n[receiver]\nname = " << r.name << "\nfield = " << field_name(r.field) << "\n";
    pos(r.at);
  }
  o << "\n[output]\ndir = " << c.outputDir << "\nenergy_every = " << c.energyEvery
    << "\nwatchdog_every = " << c.watchdogEvery << "\n";
  if (!c.snapshotTimes.empty()) {
    o << "snapshot_times =";
    for (double t : c.snapshotTimes) o << " " << num(t);
    o << "\n";
  }
  o << "snapshot_y = " << num(c.snapshotY) << "\n\n[tolerances]\nenergy_drift = " << num(c.energyDriftTol) << "\n";
  return o.str();
}

std::pair<double, double> speed_range(const SimulationConfig& c, std::size_t index) {
  const LayerSpec& l = c.layers.at(index);
  const MediaSpec& m = l.media;
  const double top = layer_top(c, index), bottom = top + l.depth;
  switch (m.kind) {
    case MediaKind::constant: return {m.constant.cs, m.constant.cp};
    case MediaKind::range: return {m.csMin, m.cpMax};
    case MediaKind::zones: {
      double lo = INFINITY, hi = 0;
      for (std::size_t i = 0; i < m.zones.size(); ++i) {
        const double zt = m.zones[i].top;
        const double zb = i + 1 < m.zones.size() ? m.zones[i + 1].top : INFINITY;
        // The first zone also covers everything above its top.
        if ((i == 0 || zt < bottom) && zb > top) {
          lo = std::min(lo, m.zones[i].m.cs);
          hi = std::max(hi, m.zones[i].m.cp);
        }
      }
      return {lo, hi};
    }
    case MediaKind::model: {
      const LoadedMedia md = load_media(c, m);
      double lo = INFINITY, hi = 0;
      const auto& d = md.cp.dims;
      for (int k = 0; k < d[2]; ++k) {
        const double z = md.cp.origin[2] + k * md.cp.spacing;
        if (z < top - md.cp.spacing || z > bottom + md.cp.spacing) continue;
        for (int j = 0; j < d[1]; ++j)
          for (int i = 0; i < d[0]; ++i) {
            hi = std::max(hi, static_cast<double>(md.cp.at(i, j, k)));
            lo = std::min(lo, static_cast<double>(md.cs.at(i, j, k)));
          }
      }
      if (!(hi > 0)) throw std::invalid_argument("model files do not cover layer " + std::to_string(index));
      return {lo, hi};
    }
  }
  return {0, 0};
}

std::vector<double> layer_spacings(const SimulationConfig& c) {
  std::vector<double> dx;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const LayerSpec& l = c.layers[i];
    dx.push_back(l.dx > 0 ? l.dx : plan::plan_spacing(speed_range(c, i).first, c.fMax, l.nppw > 0 ? l.nppw : c.nppw));
  }
  return dx;
}

std::vector<plan::LayerPlan> layer_plans(const SimulationConfig& c) {
  const auto dx = layer_spacings(c);
  std::vector<plan::LayerPlan> out;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const auto [lo, hi] = speed_range(c, i);
    out.push_back({lo, hi, c.layers[i].depth, dx[i], c.layers[i].nppw > 0 ? c.layers[i].nppw : c.nppw, c.fMax});
  }
  return out;
}

double time_step(const SimulationConfig& c) {
  if (c.dt > 0) return c.dt;
  return plan::plan_timestep(layer_plans(c), c.cCfl, c.cflDim);
}

long step_count(const SimulationConfig& c, double dt) {
  if (c.nSteps > 0) return c.nSteps;
  if (c.tEnd > 0) return static_cast<long>(std::ceil(c.tEnd / dt - 1e-9));
  return 0;
}

std::vector<std::string> validate(const SimulationConfig& c) {
  std::vector<std::string> e;
  if (!(c.extentX > 0) || !(c.extentY > 0)) e.push_back("[domain] extent_x and extent_y must be positive");
  if (!(c.fMax > 0)) e.push_back("[time] f_max must be positive");
  if (!(c.nppw > 0)) e.push_back("[time] nppw must be positive");
  if (!(c.cCfl > 0)) e.push_back("[time] c_cfl must be positive");
  if (c.cCfl > plan::kMaxCfl)
    e.push_back("[time] c_cfl = " + num(c.cCfl) + " exceeds the stability limit 6/7 = 0.857");
  if (c.cflDim < 1 || c.cflDim > 3) e.push_back("[time] cfl_dim must be 1, 2 or 3");
  if (c.dt < 0) e.push_back("[time] dt must be positive");
  if (c.nSteps < 0 || c.tEnd < 0) e.push_back("[time] steps and t_end must be non-negative");
  if (c.nSteps > 0 && c.tEnd > 0) e.push_back("[time] give steps or t_end, not both");
  if (c.uniformDx < 0) e.push_back("[time] uniform_dx must be positive");
  if (c.layers.empty()) e.push_back("at least one [layer] is required");
  if (c.energyEvery < 0 || c.watchdogEvery < 0) e.push_back("[output] cadences must be non-negative");
  for (double t : c.snapshotTimes)
    if (t < 0) e.push_back("[output] snapshot times must be non-negative");

  bool speedsOk = true;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const LayerSpec& l = c.layers[i];
    const std::string tag = "layer " + std::to_string(i) + ": ";
    if (!(l.depth > 0)) e.push_back(tag + "depth must be positive");
    if (l.dx < 0) e.push_back(tag + "dx must be positive");
    if (l.nppw < 0) e.push_back(tag + "nppw must be positive");
    const MediaSpec& m = l.media;
    try {
      switch (m.kind) {
        case MediaKind::constant: medium::check_material(m.constant); break;
        case MediaKind::zones:
          if (m.zones.empty()) throw std::invalid_argument("zones media needs at least one 'zone'");
          for (std::size_t z = 1; z < m.zones.size(); ++z)
            if (!(m.zones[z].top > m.zones[z - 1].top)) throw std::invalid_argument("zone tops must increase");
          for (const medium::Zone& z : m.zones) medium::check_material(z.m);
          break;
        case MediaKind::model: {
          std::vector<std::string> need = {m.cpFile};
          if (!m.synthesize) {
            need.push_back(m.csFile);
            need.push_back(m.rhoFile);
          }
          bool missing = false;
          for (const std::string& f : need) {
            if (f.empty()) {
              e.push_back(tag + "model media needs cp_file and either cs_file/rho_file or synthesize");
              missing = true;
            } else if (!file_ok(c, f)) {
              e.push_back(tag + "missing model file " + resolve_path(c, f).string() + " (or its .hdr)");
              missing = true;
            }
          }
          if (missing) speedsOk = false;
          break;
        }
        case MediaKind::range:
          if (!(m.csMin > 0) || !(m.cpMax >= m.csMin))
            throw std::invalid_argument("range media needs 0 < cs_min <= cp_max");
          break;
      }
    } catch (const std::exception& ex) {
      e.push_back(tag + ex.what());
      speedsOk = false;
    }
  }
  if (!speedsOk) return e;
  const std::size_t before = e.size();

  std::vector<double> dx;
  try {
    dx = layer_spacings(c);
  } catch (const std::exception& ex) {
    e.push_back(std::string("spacing: ") + ex.what());
    return e;
  }
  for (std::size_t i = 0; i < dx.size(); ++i) {
    const std::string tag = "layer " + std::to_string(i) + ": ";
    if (!plan::divides(c.extentX, dx[i]) || !plan::divides(c.extentY, dx[i]))
      e.push_back(tag + "horizontal extent is not a multiple of dx = " + num(dx[i]));
    try {
      const int cells = plan::snap_depth(c.layers[i].depth, dx[i]);
      if (std::abs(cells * dx[i] - c.layers[i].depth) > 1e-9 * c.layers[i].depth)
        e.push_back(tag + "depth " + num(c.layers[i].depth) + " is not a multiple of dx = " + num(dx[i]));
    } catch (const std::exception& ex) {
      e.push_back(tag + ex.what());
    }
    if (i > 0) {
      const double a = dx[i - 1], b = dx[i];
      try {
        interp::GridRatio::from_spacings(std::min(a, b), std::max(a, b));
      } catch (const std::exception&) {
        e.push_back("unsupported grid ratio between layers " + std::to_string(i - 1) + " and " + std::to_string(i) +
                    " (dx " + num(a) + " and " + num(b) + "); supported: 1:1, 1:2, 1:3, 2:3, 1:4, 3:4");
      }
    }
  }
  if (e.size() != before) return e;
  if (c.dt > 0) {
    try {
      const double bound = plan::plan_timestep(layer_plans(c), plan::kMaxCfl, c.cflDim);
      if (c.dt > bound) e.push_back("[time] dt = " + num(c.dt) + " exceeds the 6/7 stability bound " + num(bound));
    } catch (const std::exception& ex) {
      e.push_back(std::string("[time] ") + ex.what());
    }
  }

  // Positions, checked against the grids they will land on.
  std::vector<LayerGrid> grids;
  try {
    grids = layer_grids(c);
  } catch (const std::exception& ex) {
    e.push_back(ex.what());
    return e;
  }
  Model shape;
  for (const LayerGrid& g : grids) shape.layers.emplace_back(g, medium::IsotropicMedium{});
  auto check = [&](const std::string& what, FieldId f, const Position& p) {
    try {
      resolve(shape, f, p);
    } catch (const std::exception& ex) {
      e.push_back(what + ": " + ex.what());
    }
  };
  for (std::size_t s = 0; s < c.sources.size(); ++s) {
    check("source " + std::to_string(s), FieldId::sxx, c.sources[s].at);
    if (!(c.sources[s].fc > 0)) e.push_back("source " + std::to_string(s) + ": fc must be positive");
  }
  for (const ReceiverConfig& r : c.receivers) check("receiver " + r.name, r.field, r.at);
  return e;
}

std::vector<LayerGrid> layer_grids(const SimulationConfig& c) {
  const auto dx = layer_spacings(c);
  std::vector<LayerGrid> out;
  double z = 0;
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    LayerGrid g;
    g.h = dx[i];
    g.nx = static_cast<int>(std::lround(c.extentX / dx[i]));
    g.ny = static_cast<int>(std::lround(c.extentY / dx[i]));
    g.nzN = plan::snap_depth(c.layers[i].depth, dx[i]) + 1;
    g.zTop = z;
    g.top = i == 0 ? FaceRole::free_surface : FaceRole::interface;
    g.bottom = i + 1 == c.layers.size() ? FaceRole::free_surface : FaceRole::interface;
    g.validate();
    z += c.layers[i].depth;
    out.push_back(g);
  }
  return out;
}

Model build_model(const SimulationConfig& c) {
  std::vector<medium::MaterialFn> fns;
  for (const LayerSpec& l : c.layers) {
    const MediaSpec& m = l.media;
    switch (m.kind) {
      case MediaKind::constant: fns.push_back(medium::constant_material(m.constant)); break;
      case MediaKind::zones: fns.push_back(medium::zoned_material(m.zones)); break;
      case MediaKind::model: {
        LoadedMedia md = load_media(c, m);
        fns.push_back(medium::gridded_material(std::move(md.cp), std::move(md.cs), std::move(md.rho)));
        break;
      }
      case MediaKind::range:
        throw std::invalid_argument("range media only describes speeds for planning; it cannot be simulated");
    }
  }
  return elastodyne::build_model(layer_grids(c), fns, c.variant);
}

sim::ReceiverSpec resolve(const Model& m, FieldId f, const Position& p) {
  sim::ReceiverSpec r;
  r.field = f;
  if (p.byIndex) {
    r.layer = p.layer;
    r.i = p.i;
    r.j = p.j;
    r.k = p.k;
    sim::check_node(m, r.layer, f, r.i, r.j, r.k);
    return r;
  }
  if (m.layers.empty()) throw std::out_of_range("model has no layers");
  const double zEnd = m.layers.back().grid.zBottom();
  if (p.z < m.layers.front().grid.zTop || p.z > zEnd) throw std::out_of_range("z = " + num(p.z) + " is outside the model");
  r.layer = static_cast<int>(m.layers.size()) - 1;
  for (std::size_t i = 0; i < m.layers.size(); ++i)
    if (p.z < m.layers[i].grid.zBottom()) {
      r.layer = static_cast<int>(i);
      break;
    }
  const LayerGrid& g = m.layers[r.layer].grid;
  if (p.x < 0 || p.x >= g.extent_x() || p.y < 0 || p.y >= g.extent_y())
    throw std::out_of_range("(x, y) = (" + num(p.x) + ", " + num(p.y) + ") is outside the domain");
  const SubGrid sg = subgrid_of(f);
  auto snap = [&](double u, Stagger s, int n, bool periodic) {
    int i = static_cast<int>(std::lround(u / g.h - (s == Stagger::M ? 0.5 : 0.0)));
    if (periodic) i = ((i % n) + n) % n;
    return std::clamp(i, 0, n - 1);
  };
  r.i = snap(p.x, sg.x, g.nx, true);
  r.j = snap(p.y, sg.y, g.ny, true);
  r.k = snap(p.z - g.zTop, sg.z, g.nz(sg.z), false);
  return r;
}

sim::RunOptions run_options(const SimulationConfig& c, const Model& m, double dt) {
  sim::RunOptions o;
  o.dt = dt;
  o.nSteps = step_count(c, dt);
  for (const SourceConfig& s : c.sources) {
    const sim::ReceiverSpec at = resolve(m, FieldId::sxx, s.at);
    o.sources.push_back({at.layer, at.i, at.j, at.k, sim::Ricker{s.fc, s.t0 > 0 ? s.t0 : 1.5 / s.fc, s.amplitude}});
  }
  for (const ReceiverConfig& r : c.receivers) {
    sim::ReceiverSpec spec = resolve(m, r.field, r.at);
    spec.name = r.name;
    o.receivers.push_back(spec);
  }
  o.energyEvery = c.energyEvery;
  o.watchdogEvery = c.watchdogEvery;
  o.snapshotTimes = c.snapshotTimes;
  o.snapshotY = c.snapshotY >= 0 ? c.snapshotY : 0.5 * c.extentY;
  if (!c.snapshotTimes.empty()) o.snapshotDir = fs::path(c.outputDir) / "snapshots";
  return o;
}

}  // namespace elastodyne::cfg
