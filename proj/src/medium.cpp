#include "elastodyne/medium.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace elastodyne::medium {

namespace fs = std::filesystem;

const char* to_string(ScalarKind k) {
  switch (k) {
    case ScalarKind::cp: return "cp";
    case ScalarKind::cs: return "cs";
    case ScalarKind::rho: return "rho";
  }
  return "?";
}

ScalarKind parse_scalar_kind(const std::string& s) {
  if (s == "cp") return ScalarKind::cp;
  if (s == "cs") return ScalarKind::cs;
  if (s == "rho") return ScalarKind::rho;
  throw std::invalid_argument("unknown scalar kind '" + s + "' (expected cp, cs or rho)");
}

double ParameterGrid::sample(double x, double y, double z) const {
  const double p[3] = {x, y, z};
  int i0[3];
  double w[3];
  for (int a = 0; a < 3; ++a) {
    const double f = (p[a] - origin[a]) / spacing;
    if (f < -0.5 - 1e-9 || f > dims[a] - 0.5 + 1e-9)
      throw std::out_of_range("point outside the model volume along axis " + std::to_string(a));
    const double c = std::clamp(f, 0.0, static_cast<double>(dims[a] - 1));
    i0[a] = std::min(static_cast<int>(std::floor(c)), std::max(dims[a] - 2, 0));
    w[a] = dims[a] > 1 ? c - i0[a] : 0.0;
  }
  double acc = 0.0;
  for (int dk = 0; dk < 2; ++dk)
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) {
        const double wt = (di ? w[0] : 1 - w[0]) * (dj ? w[1] : 1 - w[1]) * (dk ? w[2] : 1 - w[2]);
        if (wt == 0.0) continue;
        acc += wt * at(i0[0] + di, i0[1] + dj, i0[2] + dk);
      }
  return acc;
}

ParameterGrid load_raw_model(const fs::path& path, std::array<int, 3> dims, double spacing, ScalarKind kind,
                             std::array<double, 3> origin) {
  if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) throw std::invalid_argument("model dims must be positive");
  if (!(spacing > 0)) throw std::invalid_argument("model spacing must be positive");
  const std::size_t n = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  std::error_code ec;
  const auto bytes = fs::file_size(path, ec);
  if (ec) throw std::runtime_error("cannot read model file " + path.string() + ": " + ec.message());
  if (bytes != n * 4)
    throw std::runtime_error("model file " + path.string() + " has " + std::to_string(bytes) + " bytes, expected " +
                             std::to_string(n * 4));
  std::ifstream in(path, std::ios::binary);
  ParameterGrid g;
  g.dims = dims;
  g.spacing = spacing;
  g.origin = origin;
  g.kind = kind;
  g.values.resize(n);
  in.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(n * 4));
  if (!in) throw std::runtime_error("short read on model file " + path.string());
  if constexpr (std::endian::native == std::endian::big) {
    for (float& v : g.values) v = std::bit_cast<float>(__builtin_bswap32(std::bit_cast<std::uint32_t>(v)));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const float v = g.values[i];
    if (!std::isfinite(v)) throw std::runtime_error("non-finite value in model file at index " + std::to_string(i));
    const bool bad = kind == ScalarKind::cs ? v < 0 : v <= 0;
    if (bad)
      throw std::runtime_error(std::string("invalid ") + to_string(kind) + " value " + std::to_string(v) +
                               " at index " + std::to_string(i));
  }
  return g;
}

fs::path sidecar_path(const fs::path& raw) { return fs::path(raw.string() + ".hdr"); }

ParameterGrid load_model(const fs::path& path) {
  std::ifstream hdr(sidecar_path(path));
  if (!hdr) throw std::runtime_error("missing model header " + sidecar_path(path).string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(hdr, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed header line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& k) {
    auto it = kv.find(k);
    if (it == kv.end()) throw std::runtime_error("model header lacks '" + k + "'");
    return it->second;
  };
  auto opt = [&](const std::string& k) { return kv.count(k) ? std::stod(kv[k]) : 0.0; };
  return load_raw_model(path, {std::stoi(need("nx")), std::stoi(need("ny")), std::stoi(need("nz"))},
                        std::stod(need("spacing")), parse_scalar_kind(need("kind")), {opt("ox"), opt("oy"), opt("oz")});
}

void write_model(const fs::path& path, const ParameterGrid& g) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (float v : g.values) {
      std::uint32_t u = std::bit_cast<std::uint32_t>(v);
      if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap32(u);
      out.write(reinterpret_cast<const char*>(&u), 4);
    }
  }
  std::ofstream hdr(sidecar_path(path));
  hdr.precision(17);
  hdr << "nx=" << g.dims[0] << "\nny=" << g.dims[1] << "\nnz=" << g.dims[2] << "\nspacing=" << g.spacing
      << "\nkind=" << to_string(g.kind) << "\nox=" << g.origin[0] << "\noy=" << g.origin[1] << "\noz=" << g.origin[2]
      << "\n";
}

std::pair<ParameterGrid, ParameterGrid> synthesize_cs_rho(const ParameterGrid& cp, double ratioTop, double ratioBottom,
                                                          double rhoTop, double rhoBottom) {
  if (!(ratioTop >= 1) || !(ratioBottom >= 1)) throw std::invalid_argument("cp/cs ratios must be at least 1");
  if (!(rhoTop > 0) || !(rhoBottom > 0)) throw std::invalid_argument("densities must be positive");
  ParameterGrid cs = cp, rho = cp;
  cs.kind = ScalarKind::cs;
  rho.kind = ScalarKind::rho;
  const int nx = cp.dims[0], ny = cp.dims[1], nz = cp.dims[2];
  const std::size_t plane = static_cast<std::size_t>(nx) * ny;
  for (int k = 0; k < nz; ++k) {
    const double t = nz > 1 ? static_cast<double>(k) / (nz - 1) : 0.0;
    const double ratio = (1 - t) * ratioTop + t * ratioBottom;
    const double r = (1 - t) * rhoTop + t * rhoBottom;
    for (std::size_t p = 0; p < plane; ++p) {
      const std::size_t idx = p + plane * k;
      cs.values[idx] = static_cast<float>(cp.values[idx] / ratio);
      rho.values[idx] = static_cast<float>(r);
    }
  }
  return {std::move(cs), std::move(rho)};
}

Field3D sample_to_subgrid(const ParameterGrid& grid, const LayerGrid& layer, SubGrid s) {
  Field3D f = make_field(layer, s);
  for (int k = 0; k < f.nz; ++k)
    for (int j = 0; j < f.ny; ++j)
      for (int i = 0; i < f.nx; ++i) f(i, j, k) = grid.sample(layer.x_at(s.x, i), layer.y_at(s.y, j), layer.z_at(s.z, k));
  return f;
}

void check_material(const Material& m) {
  if (!(m.rho > 0) || !std::isfinite(m.rho)) throw std::invalid_argument("density must be positive");
  if (!(m.cs > 0) || !std::isfinite(m.cs)) throw std::invalid_argument("shear speed must be positive");
  if (!(m.cp * m.cp > 4.0 / 3.0 * m.cs * m.cs) || !std::isfinite(m.cp))
    throw std::invalid_argument("compressional speed " + std::to_string(m.cp) + " too small for shear speed " +
                                std::to_string(m.cs));
}

MaterialFn constant_material(Material m) {
  check_material(m);
  return [m](double, double, double) { return m; };
}

MaterialFn zoned_material(std::vector<Zone> zones) {
  if (zones.empty()) throw std::invalid_argument("zoned medium needs at least one zone");
  std::sort(zones.begin(), zones.end(), [](const Zone& a, const Zone& b) { return a.top < b.top; });
  for (const Zone& z : zones) check_material(z.m);
  return [zones = std::move(zones)](double, double, double z) {
    const Zone* pick = &zones.front();
    for (const Zone& zn : zones)
      if (zn.top <= z) pick = &zn;
    return pick->m;
  };
}

MaterialFn gridded_material(ParameterGrid cp, ParameterGrid cs, ParameterGrid rho) {
  return [cp = std::move(cp), cs = std::move(cs), rho = std::move(rho)](double x, double y, double z) {
    return Material{cp.sample(x, y, z), cs.sample(x, y, z), rho.sample(x, y, z)};
  };
}

IsotropicMedium build_medium(const LayerGrid& layer, const MaterialFn& fn) {
  IsotropicMedium med;
  med.cpMax = 0;
  med.cpMin = med.csMin = INFINITY;
  const double nudge = 1e-9 * layer.h;
  auto eval = [&](SubGrid s, int i, int j, int k) {
    double z = layer.z_at(s.z, k);
    if (s.z == Stagger::N && k == 0) z += nudge;
    if (s.z == Stagger::N && k == layer.nzN - 1) z -= nudge;
    Material m = fn(layer.x_at(s.x, i), layer.y_at(s.y, j), z);
    check_material(m);
    med.cpMax = std::max(med.cpMax, m.cp);
    med.cpMin = std::min(med.cpMin, m.cp);
    med.csMin = std::min(med.csMin, m.cs);
    return m;
  };
  auto fill = [&](Field3D& f, SubGrid s, auto value) {
    f = make_field(layer, s);
    for (int k = 0; k < f.nz; ++k)
      for (int j = 0; j < f.ny; ++j)
        for (int i = 0; i < f.nx; ++i) f(i, j, k) = value(eval(s, i, j, k));
  };
  auto buoy = [](const Material& m) { return 1.0 / m.rho; };
  auto mu = [](const Material& m) { return m.mu(); };
  fill(med.bx, subgrid_of(FieldId::vx), buoy);
  fill(med.by, subgrid_of(FieldId::vy), buoy);
  fill(med.bz, subgrid_of(FieldId::vz), buoy);
  fill(med.lam, subgrid_of(FieldId::sxx), [](const Material& m) { return m.lambda(); });
  fill(med.mu, subgrid_of(FieldId::sxx), mu);
  fill(med.muxy, subgrid_of(FieldId::sxy), mu);
  fill(med.muxz, subgrid_of(FieldId::sxz), mu);
  fill(med.muyz, subgrid_of(FieldId::syz), mu);
  return med;
}

}  // namespace elastodyne::medium
