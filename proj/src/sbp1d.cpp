#include "elastodyne/sbp1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace elastodyne::sbp {
namespace {

using R = Rational;

// Unit-spacing closure coefficients for the left end; right ends are mirrored.
struct ClosureRow {
  int count;
  std::array<R, 5> coef;
};

const std::array<ClosureRow, 3>& dN_closure() {
  static const std::array<ClosureRow, 3> rows = {{
      {4, {R(-79, 78), R(27, 26), R(-1, 26), R(1, 78), R(0)}},
      {4, {R(2, 21), R(-9, 7), R(9, 7), R(-2, 21), R(0)}},
      {5, {R(1, 75), R(0), R(-27, 25), R(83, 75), R(-1, 25)}},
  }};
  return rows;
}

const std::array<ClosureRow, 4>& dM_closure() {
  static const std::array<ClosureRow, 4> rows = {{
      {3, {R(-2), R(3), R(-1), R(0), R(0)}},
      {2, {R(-1), R(1), R(0), R(0), R(0)}},
      {4, {R(1, 24), R(-9, 8), R(9, 8), R(-1, 24), R(0)}},
      {5, {R(-1, 71), R(6, 71), R(-83, 71), R(81, 71), R(-3, 71)}},
  }};
  return rows;
}

const std::array<R, 4> kNormN = {R(7, 18), R(9, 8), R(1), R(71, 72)};
const std::array<R, 3> kNormM = {R(13, 12), R(7, 8), R(25, 24)};
const std::array<R, 4> kInterior = {R(1, 24), R(-9, 8), R(9, 8), R(-1, 24)};

template <typename T, typename Convert>
std::vector<BandRowT<T>> assemble(int nOut, int nIn, int interiorShift, std::span<const ClosureRow> closure,
                                  Convert conv) {
  std::vector<BandRowT<T>> rows(nOut);
  const int nc = static_cast<int>(closure.size());
  for (int r = 0; r < nOut; ++r) {
    BandRowT<T>& row = rows[r];
    if (r < nc) {
      row.start = 0;
      row.count = closure[r].count;
      for (int t = 0; t < row.count; ++t) row.coef[t] = conv(closure[r].coef[t]);
    } else if (r >= nOut - nc) {
      // Mirror: D[nOut-1-r][nIn-1-c] = -D[r][c].
      const ClosureRow& src = closure[nOut - 1 - r];
      row.count = src.count;
      row.start = nIn - src.count;
      for (int t = 0; t < row.count; ++t) row.coef[t] = conv(-src.coef[src.count - 1 - t]);
    } else {
      row.start = r + interiorShift;
      row.count = 4;
      for (int t = 0; t < 4; ++t) row.coef[t] = conv(kInterior[t]);
    }
  }
  return rows;
}

template <typename T, typename Convert, std::size_t K>
std::vector<T> norm(int n, const std::array<R, K>& closure, Convert conv) {
  std::vector<T> a(n, conv(R(1)));
  for (std::size_t i = 0; i < K; ++i) {
    a[i] = conv(closure[i]);
    a[n - 1 - i] = conv(closure[i]);
  }
  return a;
}

void check_size(int nN) {
  if (nN < SbpSet1D::kMinPoints)
    throw std::invalid_argument("SBP operators need at least " + std::to_string(SbpSet1D::kMinPoints) +
                                " N-grid points, got " + std::to_string(nN));
}

template <typename T>
void apply_rows(std::span<const BandRowT<T>> rows, std::span<const T> u, std::span<T> out) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    T acc{};
    for (int t = 0; t < row.count; ++t) acc += row.coef[t] * u[row.start + t];
    out[r] = acc;
  }
}

}  // namespace

SbpSet1D::SbpSet1D(int nN, double dx) : nN_(nN), dx_(dx) {
  check_size(nN);
  if (!(dx > 0.0) || !std::isfinite(dx)) throw std::invalid_argument("SBP grid spacing must be positive");
  const double inv = 1.0 / dx;
  auto scaled_d = [inv](R r) { return r.to_double() * inv; };
  auto scaled_a = [dx](R r) { return r.to_double() * dx; };
  dN_ = assemble<double>(nN - 1, nN, -1, dN_closure(), scaled_d);
  dM_ = assemble<double>(nN, nN - 1, -2, dM_closure(), scaled_d);
  aN_ = norm<double>(nN, kNormN, scaled_a);
  aM_ = norm<double>(nN - 1, kNormM, scaled_a);
}

void SbpSet1D::apply_dN(std::span<const double> u, std::span<double> out) const {
  if (static_cast<int>(u.size()) != nN_ || static_cast<int>(out.size()) != nM())
    throw std::length_error("apply_dN: expected " + std::to_string(nN_) + " input values");
  apply_rows<double>(dN_, u, out);
}

void SbpSet1D::apply_dM(std::span<const double> u, std::span<double> out) const {
  if (static_cast<int>(u.size()) != nM() || static_cast<int>(out.size()) != nN_)
    throw std::length_error("apply_dM: expected " + std::to_string(nM()) + " input values");
  apply_rows<double>(dM_, u, out);
}

std::vector<double> SbpSet1D::apply_dN(std::span<const double> u) const {
  std::vector<double> out(nM());
  apply_dN(u, out);
  return out;
}

std::vector<double> SbpSet1D::apply_dM(std::span<const double> u) const {
  std::vector<double> out(nN_);
  apply_dM(u, out);
  return out;
}

double SbpSet1D::project_boundary(std::span<const double> uM, Side side) const {
  if (static_cast<int>(uM.size()) != nM()) throw std::length_error("project_boundary: expected M-grid values");
  const int n = nM();
  double acc = 0.0;
  for (int t = 0; t < 3; ++t) acc += kProjection[t] * (side == Side::left ? uM[t] : uM[n - 1 - t]);
  return acc;
}

double SbpSet1D::sbp_identity_residual() const {
  const int n = nN_, m = nM();
  // Q is nN x nM; accumulate aN*dM and (aM*dN)^T row by row.
  std::vector<double> q(static_cast<std::size_t>(n) * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < dM_[i].count; ++t) q[i * m + dM_[i].start + t] += aN_[i] * dM_[i].coef[t];
  for (int j = 0; j < m; ++j)
    for (int t = 0; t < dN_[j].count; ++t) q[(dN_[j].start + t) * m + j] += aM_[j] * dN_[j].coef[t];
  for (int j = 0; j < m; ++j) {
    q[0 * m + j] += pL(j);
    q[(n - 1) * m + j] -= pR(j);
  }
  double worst = 0.0;
  for (double v : q) worst = std::max(worst, std::abs(v));
  return worst;
}

void SbpSet1D::perturb_dN(int row, int tap, double delta) {
  BandRow& r = dN_.at(row);
  if (tap < 0 || tap >= r.count) throw std::out_of_range("perturb_dN: tap outside row");
  r.coef[tap] += delta;
}

ExactSbp build_exact_sbp(int nN) {
  check_size(nN);
  auto id = [](R r) { return r; };
  return {assemble<R>(nN - 1, nN, -1, dN_closure(), id), assemble<R>(nN, nN - 1, -2, dM_closure(), id),
          norm<R>(nN, kNormN, id), norm<R>(nN - 1, kNormM, id)};
}

Rational sbp_identity_residual_exact(int nN) {
  const ExactSbp ops = build_exact_sbp(nN);
  const int n = nN, m = nN - 1;
  std::vector<R> q(static_cast<std::size_t>(n) * m, R(0));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < ops.dM[i].count; ++t) q[i * m + ops.dM[i].start + t] += ops.aN[i] * ops.dM[i].coef[t];
  for (int j = 0; j < m; ++j)
    for (int t = 0; t < ops.dN[j].count; ++t) q[(ops.dN[j].start + t) * m + j] += ops.aM[j] * ops.dN[j].coef[t];
  const std::array<R, 3> p = {R(15, 8), R(-5, 4), R(3, 8)};
  for (int t = 0; t < 3; ++t) {
    q[0 * m + t] += p[t];
    q[(n - 1) * m + (m - 1 - t)] -= p[t];
  }
  R worst(0);
  for (const R& v : q)
    if (worst < v.abs()) worst = v.abs();
  return worst;
}

}  // namespace elastodyne::sbp
