#include "elastodyne/wavefield3d.hpp"

#include <stdexcept>
#include <vector>

namespace elastodyne {
namespace {

constexpr double c1 = 1.0 / 24.0;
constexpr double c2 = 9.0 / 8.0;

inline int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }

// out += sum_t row.coef[t] * plane(row.start + t), whole planes at once.
void add_dz_plane(const Field3D& u, const sbp::BandRow& row, double* out, const double* scale = nullptr) {
  const std::size_t n = u.plane();
  for (int t = 0; t < row.count; ++t) {
    const double c = row.coef[t];
    const double* in = u.slice(row.start + t);
    if (scale)
      for (std::size_t p = 0; p < n; ++p) out[p] += c * scale[p] * in[p];
    else
      for (std::size_t p = 0; p < n; ++p) out[p] += c * in[p];
  }
}

void check_shapes(const WavefieldState& s, const Layer& layer) {
  for (FieldId id : kAllFields) {
    const Field3D& f = s[id];
    const SubGrid g = subgrid_of(id);
    if (f.nx != layer.grid.nx || f.ny != layer.grid.ny || f.nz != layer.grid.nz(g.z))
      throw std::invalid_argument(std::string("field ") + field_name(id) + " does not match the layer grid");
  }
}

}  // namespace

WavefieldState::WavefieldState(const LayerGrid& g) {
  for (FieldId id : kAllFields) (*this)[id] = make_field(g, subgrid_of(id));
}

void WavefieldState::zero() {
  for (Field3D& x : f) x.fill(0.0);
}

std::size_t WavefieldState::unknowns() const {
  std::size_t n = 0;
  for (const Field3D& x : f) n += x.size();
  return n;
}

Layer::Layer(const LayerGrid& g, medium::IsotropicMedium m) : grid(g), sbpZ((g.validate(), g.nzN), g.h), med(std::move(m)) {}

void add_dx_plane(const double* u, double* out, int nx, int ny, bool fromN, double scale) {
  const int o = fromN ? -1 : -2;
  const double a = c1 * scale, b = c2 * scale;
  for (int j = 0; j < ny; ++j) {
    const double* in = u + static_cast<std::size_t>(j) * nx;
    double* dst = out + static_cast<std::size_t>(j) * nx;
    const int lo = -o, hi = nx - 3 - o;
    for (int i = 0; i < lo; ++i)
      dst[i] += a * in[wrap(i + o, nx)] - b * in[wrap(i + o + 1, nx)] + b * in[wrap(i + o + 2, nx)] -
                a * in[wrap(i + o + 3, nx)];
    for (int i = lo; i < hi; ++i)
      dst[i] += a * in[i + o] - b * in[i + o + 1] + b * in[i + o + 2] - a * in[i + o + 3];
    for (int i = hi; i < nx; ++i)
      dst[i] += a * in[wrap(i + o, nx)] - b * in[wrap(i + o + 1, nx)] + b * in[wrap(i + o + 2, nx)] -
                a * in[wrap(i + o + 3, nx)];
  }
}

void add_dy_plane(const double* u, double* out, int nx, int ny, bool fromN, double scale) {
  const int o = fromN ? -1 : -2;
  const double a = c1 * scale, b = c2 * scale;
  for (int j = 0; j < ny; ++j) {
    const double* r0 = u + static_cast<std::size_t>(wrap(j + o, ny)) * nx;
    const double* r1 = u + static_cast<std::size_t>(wrap(j + o + 1, ny)) * nx;
    const double* r2 = u + static_cast<std::size_t>(wrap(j + o + 2, ny)) * nx;
    const double* r3 = u + static_cast<std::size_t>(wrap(j + o + 3, ny)) * nx;
    double* dst = out + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) dst[i] += a * r0[i] - b * r1[i] + b * r2[i] - a * r3[i];
  }
}

void stress_rhs(const WavefieldState& s, const Layer& layer, WavefieldState& out) {
  check_shapes(s, layer);
  check_shapes(out, layer);
  const LayerGrid& g = layer.grid;
  const int nx = g.nx, ny = g.ny, nzN = g.nzN, nzM = g.nzM();
  const double inv = 1.0 / g.h;
  const std::size_t np = static_cast<std::size_t>(nx) * ny;
  const auto dN = layer.sbpZ.dN_rows();
  const auto dM = layer.sbpZ.dM_rows();
  const auto& med = layer.med;

#pragma omp parallel
  {
    std::vector<double> exx(np), eyy(np), ezz(np);
#pragma omp for schedule(static)
    for (int k = 0; k < nzN; ++k) {
      std::fill(exx.begin(), exx.end(), 0.0);
      std::fill(eyy.begin(), eyy.end(), 0.0);
      std::fill(ezz.begin(), ezz.end(), 0.0);
      add_dx_plane(s[FieldId::vx].slice(k), exx.data(), nx, ny, false, inv);
      add_dy_plane(s[FieldId::vy].slice(k), eyy.data(), nx, ny, false, inv);
      add_dz_plane(s[FieldId::vz], dM[k], ezz.data());
      const double* lam = med.lam.slice(k);
      const double* mu = med.mu.slice(k);
      double* sxx = out[FieldId::sxx].slice(k);
      double* syy = out[FieldId::syy].slice(k);
      double* szz = out[FieldId::szz].slice(k);
      for (std::size_t p = 0; p < np; ++p) {
        const double tr = lam[p] * (exx[p] + eyy[p] + ezz[p]);
        sxx[p] = tr + 2 * mu[p] * exx[p];
        syy[p] = tr + 2 * mu[p] * eyy[p];
        szz[p] = tr + 2 * mu[p] * ezz[p];
      }
      // sxy shares the N z-planes.
      std::fill(exx.begin(), exx.end(), 0.0);
      add_dx_plane(s[FieldId::vy].slice(k), exx.data(), nx, ny, true, inv);
      add_dy_plane(s[FieldId::vx].slice(k), exx.data(), nx, ny, true, inv);
      const double* mxy = med.muxy.slice(k);
      double* sxy = out[FieldId::sxy].slice(k);
      for (std::size_t p = 0; p < np; ++p) sxy[p] = mxy[p] * exx[p];
    }
#pragma omp for schedule(static)
    for (int k = 0; k < nzM; ++k) {
      std::fill(exx.begin(), exx.end(), 0.0);
      std::fill(eyy.begin(), eyy.end(), 0.0);
      add_dx_plane(s[FieldId::vz].slice(k), exx.data(), nx, ny, true, inv);
      add_dz_plane(s[FieldId::vx], dN[k], exx.data());
      add_dy_plane(s[FieldId::vz].slice(k), eyy.data(), nx, ny, true, inv);
      add_dz_plane(s[FieldId::vy], dN[k], eyy.data());
      const double* mxz = med.muxz.slice(k);
      const double* myz = med.muyz.slice(k);
      double* sxz = out[FieldId::sxz].slice(k);
      double* syz = out[FieldId::syz].slice(k);
      for (std::size_t p = 0; p < np; ++p) {
        sxz[p] = mxz[p] * exx[p];
        syz[p] = myz[p] * eyy[p];
      }
    }
  }
}

void velocity_rhs(const WavefieldState& s, const Layer& layer, WavefieldState& out) {
  check_shapes(s, layer);
  check_shapes(out, layer);
  const LayerGrid& g = layer.grid;
  const int nx = g.nx, ny = g.ny, nzN = g.nzN, nzM = g.nzM();
  const double inv = 1.0 / g.h;
  const std::size_t np = static_cast<std::size_t>(nx) * ny;
  const auto dN = layer.sbpZ.dN_rows();
  const auto dM = layer.sbpZ.dM_rows();
  const auto& med = layer.med;

#pragma omp parallel
  {
    std::vector<double> ax(np), ay(np);
#pragma omp for schedule(static)
    for (int k = 0; k < nzN; ++k) {
      std::fill(ax.begin(), ax.end(), 0.0);
      std::fill(ay.begin(), ay.end(), 0.0);
      add_dx_plane(s[FieldId::sxx].slice(k), ax.data(), nx, ny, true, inv);
      add_dy_plane(s[FieldId::sxy].slice(k), ax.data(), nx, ny, false, inv);
      add_dz_plane(s[FieldId::sxz], dM[k], ax.data());
      add_dx_plane(s[FieldId::sxy].slice(k), ay.data(), nx, ny, false, inv);
      add_dy_plane(s[FieldId::syy].slice(k), ay.data(), nx, ny, true, inv);
      add_dz_plane(s[FieldId::syz], dM[k], ay.data());
      const double* bx = med.bx.slice(k);
      const double* by = med.by.slice(k);
      double* vx = out[FieldId::vx].slice(k);
      double* vy = out[FieldId::vy].slice(k);
      for (std::size_t p = 0; p < np; ++p) {
        vx[p] = bx[p] * ax[p];
        vy[p] = by[p] * ay[p];
      }
    }
#pragma omp for schedule(static)
    for (int k = 0; k < nzM; ++k) {
      std::fill(ax.begin(), ax.end(), 0.0);
      add_dx_plane(s[FieldId::sxz].slice(k), ax.data(), nx, ny, false, inv);
      add_dy_plane(s[FieldId::syz].slice(k), ax.data(), nx, ny, false, inv);
      add_dz_plane(s[FieldId::szz], dN[k], ax.data());
      const double* bz = med.bz.slice(k);
      double* vz = out[FieldId::vz].slice(k);
      for (std::size_t p = 0; p < np; ++p) vz[p] = bz[p] * ax[p];
    }
  }

  // Free-surface penalties: traction traces pushed toward zero.
  const auto aN = layer.sbpZ.aN();
  const auto aM = layer.sbpZ.aM();
  const auto& P = sbp::SbpSet1D::kProjection;
  auto face = [&](bool top) {
    const double sign = top ? 1.0 : -1.0;
    const int kN = top ? 0 : nzN - 1;
    auto mplane = [&](int t) { return top ? t : nzM - 1 - t; };
    const double wN = sign / aN[kN];
    for (FieldId sf : {FieldId::sxz, FieldId::syz}) {
      const bool isx = sf == FieldId::sxz;
      double* v = out[isx ? FieldId::vx : FieldId::vy].slice(kN);
      const double* b = (isx ? med.bx : med.by).slice(kN);
      const double* s0 = s[sf].slice(mplane(0));
      const double* s1 = s[sf].slice(mplane(1));
      const double* s2 = s[sf].slice(mplane(2));
      for (std::size_t p = 0; p < np; ++p) v[p] += wN * b[p] * (P[0] * s0[p] + P[1] * s1[p] + P[2] * s2[p]);
    }
    const double* szz = s[FieldId::szz].slice(kN);
    for (int t = 0; t < 3; ++t) {
      const int k = mplane(t);
      const double w = sign * P[t] / aM[k];
      double* v = out[FieldId::vz].slice(k);
      const double* b = med.bz.slice(k);
      for (std::size_t p = 0; p < np; ++p) v[p] += w * b[p] * szz[p];
    }
  };
  if (g.top == FaceRole::free_surface) face(true);
  if (g.bottom == FaceRole::free_surface) face(false);
}

}  // namespace elastodyne
