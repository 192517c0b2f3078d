#include "elastodyne/interface.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace elastodyne::iface {
namespace {

using interp::GridKind;

int wrap(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

struct TraceInfo {
  FieldId field;     // field whose trace is taken
  bool projected;    // M-kind in z: trace by pL/pR, else by eL/eR
};

TraceInfo info(Trace t) {
  switch (t) {
    case Trace::vx: return {FieldId::vx, false};
    case Trace::vy: return {FieldId::vy, false};
    case Trace::vz: return {FieldId::vz, true};
    case Trace::sxz: return {FieldId::sxz, true};
    case Trace::syz: return {FieldId::syz, true};
    case Trace::szz: return {FieldId::szz, false};
  }
  throw std::logic_error("unknown trace");
}

// Mismatch own - T(neighbor) on each side for trace t.
void mismatches(const WavefieldState& sU, const WavefieldState& sL,
                const InterfaceCoupling& c, Trace t, std::vector<double>& gU, std::vector<double>& gL) {
  const auto own_U = extract_trace(sU, t, true);
  const auto own_L = extract_trace(sL, t, false);
  const int kind = trace_kind(t);
  gU.assign(own_U.size(), 0.0);
  gL.assign(own_L.size(), 0.0);
  apply_trace_op(c.lowerToUpper[kind], own_L.data(), gU.data());
  apply_trace_op(c.upperToLower[kind], own_U.data(), gL.data());
  for (std::size_t p = 0; p < gU.size(); ++p) gU[p] = own_U[p] - gU[p];
  for (std::size_t p = 0; p < gL.size(); ++p) gL[p] = own_L[p] - gL[p];
}

}  // namespace

const char* trace_name(Trace t) {
  static const char* names[] = {"vx", "vy", "vz", "sxz", "syz", "szz"};
  return names[static_cast<int>(t)];
}

int trace_kind(Trace t) {
  switch (t) {
    case Trace::vx:
    case Trace::sxz: return 0;
    case Trace::vy:
    case Trace::syz: return 1;
    default: return 2;
  }
}

std::vector<double> extract_trace(const WavefieldState& s, Trace t, bool bottomFace) {
  const TraceInfo ti = info(t);
  const Field3D& f = s[ti.field];
  const std::size_t np = f.plane();
  std::vector<double> out(np, 0.0);
  if (!ti.projected) {
    const double* src = f.slice(bottomFace ? f.nz - 1 : 0);
    std::copy(src, src + np, out.begin());
    return out;
  }
  const auto& P = sbp::SbpSet1D::kProjection;
  for (int tap = 0; tap < 3; ++tap) {
    const double* src = f.slice(bottomFace ? f.nz - 1 - tap : tap);
    for (std::size_t p = 0; p < np; ++p) out[p] += P[tap] * src[p];
  }
  return out;
}

void apply_trace_op(const TraceOp& op, const double* in, double* out) {
  const int nxI = op.x.nIn, nxO = op.x.nOut, nyI = op.y.nIn, nyO = op.y.nOut;
  std::vector<double> tmp(static_cast<std::size_t>(nxO) * nyI);
  for (int j = 0; j < nyI; ++j) {
    const double* row = in + static_cast<std::size_t>(j) * nxI;
    double* dst = tmp.data() + static_cast<std::size_t>(j) * nxO;
    for (int i = 0; i < nxO; ++i) {
      const interp::InterpRow& r = op.x.rows[i];
      double acc = 0.0;
      for (std::size_t t = 0; t < r.idx.size(); ++t) acc += r.w[t] * row[wrap(r.idx[t], nxI)];
      dst[i] = acc;
    }
  }
  for (int j = 0; j < nyO; ++j) {
    double* dst = out + static_cast<std::size_t>(j) * nxO;
    std::fill(dst, dst + nxO, 0.0);
    const interp::InterpRow& r = op.y.rows[j];
    for (std::size_t t = 0; t < r.idx.size(); ++t) {
      const double w = r.w[t];
      const double* src = tmp.data() + static_cast<std::size_t>(wrap(r.idx[t], nyI)) * nxO;
      for (int i = 0; i < nxO; ++i) dst[i] += w * src[i];
    }
  }
}

InterfaceCoupling build_interface(const LayerGrid& upper, const LayerGrid& lower, interp::Variant variant,
                                  CouplingOptions options) {
  const double ex = upper.extent_x(), ey = upper.extent_y();
  if (std::abs(ex - lower.extent_x()) > 1e-9 * ex || std::abs(ey - lower.extent_y()) > 1e-9 * ey)
    throw std::invalid_argument("interface layers have different horizontal extents");
  InterfaceCoupling c;
  c.options = options;
  c.upperIsFine = upper.h < lower.h;
  const LayerGrid& fine = c.upperIsFine ? upper : lower;
  const LayerGrid& coarse = c.upperIsFine ? lower : upper;
  c.ratio = interp::GridRatio::from_spacings(fine.h, coarse.h);
  const auto [p, q] = std::pair{c.ratio.p, c.ratio.q};
  if (static_cast<long>(coarse.nx) * q != static_cast<long>(fine.nx) * p ||
      static_cast<long>(coarse.ny) * q != static_cast<long>(fine.ny) * p || coarse.nx % p != 0 || coarse.ny % p != 0)
    throw std::invalid_argument("horizontal point counts " + std::to_string(upper.nx) + "x" + std::to_string(upper.ny) +
                                " and " + std::to_string(lower.nx) + "x" + std::to_string(lower.ny) +
                                " are incompatible with ratio " + c.ratio.str());
  if (c.ratio.conforming() && variant == interp::Variant::alternative) variant = interp::Variant::standard;
  const interp::Variant v = c.ratio == interp::GridRatio{2, 3} ? variant : interp::Variant::standard;

  auto ops = [&](GridKind kind, int nC) {
    auto c2f = interp::build_coarse_to_fine(c.ratio, kind, nC, v);
    auto f2c = interp::derive_fine_to_coarse(c2f, fine.h, coarse.h);
    return std::pair{c2f, f2c};
  };
  const auto [xN, xNb] = ops(GridKind::N, coarse.nx);
  const auto [xM, xMb] = ops(GridKind::M, coarse.nx);
  const auto [yN, yNb] = ops(GridKind::N, coarse.ny);
  const auto [yM, yMb] = ops(GridKind::M, coarse.ny);
  // c2f goes coarse -> fine; pick per direction.
  auto pick = [&](bool toFine, const interp::InterpOp1D& c2f, const interp::InterpOp1D& f2c) {
    return toFine ? c2f : f2c;
  };
  const bool upToLowIsToFine = !c.upperIsFine;
  c.upperToLower[0] = {pick(upToLowIsToFine, xM, xMb), pick(upToLowIsToFine, yN, yNb)};
  c.upperToLower[1] = {pick(upToLowIsToFine, xN, xNb), pick(upToLowIsToFine, yM, yMb)};
  c.upperToLower[2] = {pick(upToLowIsToFine, xN, xNb), pick(upToLowIsToFine, yN, yNb)};
  c.lowerToUpper[0] = {pick(!upToLowIsToFine, xM, xMb), pick(!upToLowIsToFine, yN, yNb)};
  c.lowerToUpper[1] = {pick(!upToLowIsToFine, xN, xNb), pick(!upToLowIsToFine, yM, yMb)};
  c.lowerToUpper[2] = {pick(!upToLowIsToFine, xN, xNb), pick(!upToLowIsToFine, yN, yNb)};
  return c;
}

void add_stress_corrections(const Layer& U, const Layer& L, const WavefieldState& sU, const WavefieldState& sL,
                            const InterfaceCoupling& c, WavefieldState& rhsU, WavefieldState& rhsL) {
  const double half = 0.5 * c.options.penaltyScale;
  const auto& P = sbp::SbpSet1D::kProjection;
  std::vector<double> gU, gL;

  if (c.options.enabled[static_cast<int>(Trace::vz)]) {
    mismatches(sU, sL, c, Trace::vz, gU, gL);
    // Normal strain correction on the face's N plane, scaled by the stiffness.
    auto apply = [](const Layer& lay, WavefieldState& rhs, int k, double w, const std::vector<double>& g) {
      const double* lam = lay.med.lam.slice(k);
      const double* mu = lay.med.mu.slice(k);
      double* sxx = rhs[FieldId::sxx].slice(k);
      double* syy = rhs[FieldId::syy].slice(k);
      double* szz = rhs[FieldId::szz].slice(k);
      for (std::size_t p = 0; p < g.size(); ++p) {
        const double d = w * g[p];
        sxx[p] += lam[p] * d;
        syy[p] += lam[p] * d;
        szz[p] += (lam[p] + 2 * mu[p]) * d;
      }
    };
    const int kU = U.grid.nzN - 1;
    apply(U, rhsU, kU, -half / U.sbpZ.aN()[kU], gU);
    apply(L, rhsL, 0, half / L.sbpZ.aN()[0], gL);
  }

  for (Trace t : {Trace::vx, Trace::vy}) {
    if (!c.options.enabled[static_cast<int>(t)]) continue;
    mismatches(sU, sL, c, t, gU, gL);
    const FieldId target = t == Trace::vx ? FieldId::sxz : FieldId::syz;
    auto apply = [&](const Layer& lay, WavefieldState& rhs, bool bottom, double sign, const std::vector<double>& g) {
      const Field3D& mu = t == Trace::vx ? lay.med.muxz : lay.med.muyz;
      const int nzM = lay.grid.nzM();
      for (int tap = 0; tap < 3; ++tap) {
        const int k = bottom ? nzM - 1 - tap : tap;
        const double w = sign * half * P[tap] / lay.sbpZ.aM()[k];
        const double* m = mu.slice(k);
        double* s = rhs[target].slice(k);
        for (std::size_t p = 0; p < g.size(); ++p) s[p] += m[p] * w * g[p];
      }
    };
    apply(U, rhsU, true, -1.0, gU);
    apply(L, rhsL, false, 1.0, gL);
  }
}

void add_velocity_corrections(const Layer& U, const Layer& L, const WavefieldState& sU, const WavefieldState& sL,
                              const InterfaceCoupling& c, WavefieldState& rhsU, WavefieldState& rhsL) {
  const double half = 0.5 * c.options.penaltyScale;
  const auto& P = sbp::SbpSet1D::kProjection;
  std::vector<double> gU, gL;

  if (c.options.enabled[static_cast<int>(Trace::szz)]) {
    mismatches(sU, sL, c, Trace::szz, gU, gL);
    auto apply = [&](const Layer& lay, WavefieldState& rhs, bool bottom, double sign, const std::vector<double>& g) {
      const int nzM = lay.grid.nzM();
      for (int tap = 0; tap < 3; ++tap) {
        const int k = bottom ? nzM - 1 - tap : tap;
        const double w = sign * half * P[tap] / lay.sbpZ.aM()[k];
        const double* b = lay.med.bz.slice(k);
        double* v = rhs[FieldId::vz].slice(k);
        for (std::size_t p = 0; p < g.size(); ++p) v[p] += b[p] * w * g[p];
      }
    };
    apply(U, rhsU, true, -1.0, gU);
    apply(L, rhsL, false, 1.0, gL);
  }

  for (Trace t : {Trace::sxz, Trace::syz}) {
    if (!c.options.enabled[static_cast<int>(t)]) continue;
    mismatches(sU, sL, c, t, gU, gL);
    const FieldId target = t == Trace::sxz ? FieldId::vx : FieldId::vy;
    auto apply = [&](const Layer& lay, WavefieldState& rhs, bool bottom, double sign, const std::vector<double>& g) {
      const int k = bottom ? lay.grid.nzN - 1 : 0;
      const double w = sign * half / lay.sbpZ.aN()[k];
      const double* b = (t == Trace::sxz ? lay.med.bx : lay.med.by).slice(k);
      double* v = rhs[target].slice(k);
      for (std::size_t p = 0; p < g.size(); ++p) v[p] += b[p] * w * g[p];
    };
    apply(U, rhsU, true, -1.0, gU);
    apply(L, rhsL, false, 1.0, gL);
  }
}

void add_interface_corrections(const Layer& upper, const Layer& lower, const WavefieldState& sU,
                               const WavefieldState& sL, const InterfaceCoupling& c, WavefieldState& rhsU,
                               WavefieldState& rhsL) {
  add_stress_corrections(upper, lower, sU, sL, c, rhsU, rhsL);
  add_velocity_corrections(upper, lower, sU, sL, c, rhsU, rhsL);
}

}  // namespace elastodyne::iface
