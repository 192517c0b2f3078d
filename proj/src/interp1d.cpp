#include "elastodyne/interp1d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "elastodyne/rational.hpp"

namespace elastodyne::interp {
namespace {

using R = Rational;

// A tabulated row: weights on coarse indices first, first+1, ... within one
// cycle. The table's index origin is not consistent across ratios, so the
// placement is recovered from the row's first moment (see place_row).
struct BankRow {
  int first;
  std::vector<R> w;
};
using Bank = std::vector<BankRow>;

std::vector<R> over(std::initializer_list<std::int64_t> nums, std::int64_t den) {
  std::vector<R> out;
  for (auto n : nums) out.emplace_back(n, den);
  return out;
}

const Bank& bank(GridRatio r, GridKind kind, Variant variant) {
  static const std::map<std::tuple<int, int, int, int>, Bank> banks = [] {
    std::map<std::tuple<int, int, int, int>, Bank> b;
    const int N = 0, M = 1, S = 0, A = 1;
    b[{1, 1, N, S}] = {{0, {R(1)}}};
    b[{1, 1, M, S}] = {{0, {R(1)}}};

    b[{1, 2, N, S}] = {{0, {R(1)}}, {-1, over({-1, 9, 9, -1}, 16)}};
    b[{1, 2, M, S}] = {{0, over({5, 30, -3}, 32)}, {0, over({-3, 30, 5}, 32)}};

    b[{1, 3, N, S}] = {{0, {R(1)}}, {-1, over({-1, 8, 2}, 9)}, {0, over({2, 8, -1}, 9)}};
    b[{1, 3, M, S}] = {{-1, over({2, 8, -1}, 9)}, {0, {R(1)}}, {-1, over({-1, 8, 2}, 9)}};

    b[{2, 3, N, S}] = {{0, {R(1)}},
                       {-1, over({-11, 96, 226, -24, 1}, 288)},
                       {-1, over({1, -24, 226, 96, -11}, 288)}};
    b[{2, 3, M, S}] = {{-1, over({101, 1153, -113, 11}, 1152)},
                       {-1, over({-1, 9, 9, -1}, 16)},
                       {-1, over({11, -113, 1153, 101}, 1152)}};
    b[{2, 3, N, A}] = {{-2, over({-1, 4, 90, 4, -1}, 96)},
                       {-1, over({-13, 103, 217, -19}, 288)},
                       {0, over({-19, 217, 103, -13}, 288)}};
    b[{2, 3, M, A}] = {{-2, over({-11, 89, 527, -29}, 576)},
                       {-1, over({-1, 9, 9, -1}, 16)},
                       {0, over({-29, 527, 89, -11}, 576)}};

    b[{1, 4, N, S}] = {{0, {R(1)}},
                       {-1, over({-3, 30, 5}, 32)},
                       {-1, over({-1, 9, 9, -1}, 16)},
                       {0, over({5, 30, -3}, 32)}};
    b[{1, 4, M, S}] = {{-1, over({33, 110, -15}, 128)},
                       {-1, over({9, 126, -7}, 128)},
                       {-1, over({-7, 126, 9}, 128)},
                       {-1, over({-15, 110, 33}, 128)}};

    b[{3, 4, N, S}] = {{0, {R(1)}},
                       {-1, over({-119, 1005, 3774, -367, 27}, 4320)},
                       {-1, over({7, -156, 1229, 1229, -156, 7}, 2160)},
                       {0, over({27, -367, 3774, 1005, -119}, 4320)}};
    b[{3, 4, M, S}] = {{-1, over({70, 1167, -96, 11}, 1152)},
                       {-1, over({-154, 1325, 2592, -335, 28}, 3456)},
                       {-1, over({28, -335, 2592, 1325, -154}, 3456)},
                       {0, over({11, -96, 1167, 70}, 1152)}};
    return b;
  }();
  const int k = kind == GridKind::N ? 0 : 1;
  const int v = variant == Variant::standard ? 0 : 1;
  auto it = banks.find({r.p, r.q, k, v});
  if (it == banks.end()) throw std::invalid_argument("no interpolation stencils for ratio " + r.str());
  return it->second;
}

// Position of fine output j in coarse-index units (coarse node i sits at i).
R fine_position(GridRatio r, GridKind kind, std::int64_t j) {
  if (kind == GridKind::N) return R(j * r.p, r.q);
  return R((2 * j + 1) * r.p, 2 * r.q) - R(1, 2);
}

// Absolute coarse index of the row's first weight for fine output j: the
// weighted mean of the row's offsets must land on the output position.
std::int64_t place_row(const BankRow& row, R position) {
  R tau(0);
  for (std::size_t t = 0; t < row.w.size(); ++t) tau += row.w[t] * R(row.first + static_cast<std::int64_t>(t));
  const R anchor = position - tau;
  if (anchor.den() != 1) throw std::logic_error("interpolation stencil does not match its output position");
  return anchor.num() + row.first;
}

int wrap(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

const char* to_string(GridKind k) { return k == GridKind::N ? "N" : "M"; }
const char* to_string(Direction d) { return d == Direction::coarse_to_fine ? "coarse-to-fine" : "fine-to-coarse"; }
const char* to_string(Variant v) { return v == Variant::standard ? "standard" : "alternative"; }

std::string GridRatio::str() const { return std::to_string(p) + ":" + std::to_string(q); }

bool GridRatio::supported(int p, int q) {
  if (p == q) return p == 1;
  for (const GridRatio& r : tabulated())
    if (r.p == p && r.q == q) return true;
  return false;
}

std::vector<GridRatio> GridRatio::tabulated() { return {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}}; }

GridRatio GridRatio::make(int p, int q) {
  if (!supported(p, q)) throw std::invalid_argument("unsupported grid spacing ratio " + GridRatio{p, q}.str());
  return {p, q};
}

GridRatio GridRatio::parse(std::string_view text) {
  const auto colon = text.find(':');
  int p = 0, q = 0;
  bool ok = colon != std::string_view::npos;
  if (ok) {
    auto a = std::from_chars(text.data(), text.data() + colon, p);
    auto b = std::from_chars(text.data() + colon + 1, text.data() + text.size(), q);
    ok = a.ec == std::errc{} && a.ptr == text.data() + colon && b.ec == std::errc{} &&
         b.ptr == text.data() + text.size();
  }
  if (!ok) throw std::invalid_argument("malformed ratio '" + std::string(text) + "', expected p:q");
  return make(p, q);
}

GridRatio GridRatio::from_spacings(double fine, double coarse) {
  if (!(fine > 0) || !(coarse > 0)) throw std::invalid_argument("spacings must be positive");
  for (int q = 1; q <= 16; ++q) {
    const double pd = fine / coarse * q;
    const int p = static_cast<int>(std::lround(pd));
    if (p >= 1 && std::abs(pd - p) < 1e-9 * q && std::gcd(p, q) == 1) return make(p, q);
  }
  throw std::invalid_argument("unsupported grid spacing ratio between spacings " + std::to_string(fine) + " and " +
                              std::to_string(coarse));
}

double InterpOp1D::in_coord(int i) const {
  const bool coarse = direction == Direction::coarse_to_fine;
  const double h = coarse ? 1.0 : static_cast<double>(ratio.p) / ratio.q;
  return kind == GridKind::N ? i * h : (i + 0.5) * h - 0.5;
}

double InterpOp1D::out_coord(int j) const {
  const bool coarse = direction == Direction::fine_to_coarse;
  const double h = coarse ? 1.0 : static_cast<double>(ratio.p) / ratio.q;
  return kind == GridKind::N ? j * h : (j + 0.5) * h - 0.5;
}

std::string InterpOp1D::name() const {
  return std::string(to_string(kind)) + " " + ratio.str() + " " + to_string(direction) +
         (variant == Variant::alternative ? " (alternative)" : "");
}

InterpOp1D build_coarse_to_fine(GridRatio ratio, GridKind kind, int nCoarse, Variant variant) {
  ratio = GridRatio::make(ratio.p, ratio.q);
  if (variant == Variant::alternative && !(ratio.p == 2 && ratio.q == 3))
    throw std::invalid_argument("alternative stencils exist only for ratio 2:3");
  if (nCoarse <= 0 || nCoarse % ratio.p != 0)
    throw std::invalid_argument("coarse count " + std::to_string(nCoarse) + " gives a non-integral fine count for ratio " +
                                ratio.str());
  const Bank& b = bank(ratio, kind, variant);
  InterpOp1D op;
  op.ratio = ratio;
  op.kind = kind;
  op.direction = Direction::coarse_to_fine;
  op.variant = variant;
  op.nIn = nCoarse;
  op.nOut = nCoarse / ratio.p * ratio.q;
  op.rows.resize(op.nOut);
  for (int j = 0; j < op.nOut; ++j) {
    const BankRow& br = b[j % ratio.q];
    const auto first = place_row(br, fine_position(ratio, kind, j));
    InterpRow& row = op.rows[j];
    for (std::size_t t = 0; t < br.w.size(); ++t) {
      row.idx.push_back(static_cast<int>(first + static_cast<std::int64_t>(t)));
      row.w.push_back(br.w[t].to_double());
    }
  }
  return op;
}

InterpOp1D derive_fine_to_coarse(const InterpOp1D& op, std::span<const double> aFine, std::span<const double> aCoarse) {
  if (op.direction != Direction::coarse_to_fine) throw std::invalid_argument("derive_fine_to_coarse needs a coarse-to-fine operator");
  if (static_cast<int>(aFine.size()) != op.nOut || static_cast<int>(aCoarse.size()) != op.nIn)
    throw std::length_error("norm weight lengths do not match operator " + op.name());
  InterpOp1D out;
  out.ratio = op.ratio;
  out.kind = op.kind;
  out.direction = Direction::fine_to_coarse;
  out.variant = op.variant;
  out.nIn = op.nOut;
  out.nOut = op.nIn;
  out.rows.resize(out.nOut);
  const int nF = op.nOut, nC = op.nIn;
  for (int j = 0; j < nF; ++j) {
    const InterpRow& row = op.rows[j];
    for (std::size_t t = 0; t < row.idx.size(); ++t) {
      const int i = wrap(row.idx[t], nC);
      // Unwrap the fine index into the coarse output's periodic image.
      const int shift = (row.idx[t] - i) / nC;
      InterpRow& dst = out.rows[i];
      dst.idx.push_back(j - shift * nF);
      dst.w.push_back(aFine[j] * row.w[t] / aCoarse[i]);
    }
  }
  for (InterpRow& r : out.rows) {
    std::vector<std::size_t> order(r.idx.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.idx[a] < r.idx[b]; });
    InterpRow sorted;
    for (auto k : order) {
      sorted.idx.push_back(r.idx[k]);
      sorted.w.push_back(r.w[k]);
    }
    r = std::move(sorted);
  }
  return out;
}

InterpOp1D derive_fine_to_coarse(const InterpOp1D& op, double dxFine, double dxCoarse) {
  return derive_fine_to_coarse(op, std::vector<double>(op.nOut, dxFine), std::vector<double>(op.nIn, dxCoarse));
}

void apply_interp(const InterpOp1D& op, std::span<const double> values, std::span<double> out) {
  if (static_cast<int>(values.size()) != op.nIn || static_cast<int>(out.size()) != op.nOut)
    throw std::length_error("apply_interp: expected " + std::to_string(op.nIn) + " values for " + op.name());
  for (int j = 0; j < op.nOut; ++j) {
    const InterpRow& row = op.rows[j];
    double acc = 0.0;
    for (std::size_t t = 0; t < row.idx.size(); ++t) acc += row.w[t] * values[wrap(row.idx[t], op.nIn)];
    out[j] = acc;
  }
}

std::vector<double> apply_interp(const InterpOp1D& op, std::span<const double> values) {
  std::vector<double> out(op.nOut);
  apply_interp(op, values, out);
  return out;
}

double check_poly_exactness(const InterpOp1D& op, int degree) {
  double worst = 0.0;
  for (int j = 0; j < op.nOut; ++j) {
    const InterpRow& row = op.rows[j];
    const double x0 = op.out_coord(j);
    double acc = 0.0;
    for (std::size_t t = 0; t < row.idx.size(); ++t) acc += row.w[t] * std::pow(op.in_coord(row.idx[t]) - x0, degree);
    worst = std::max(worst, std::abs(acc - (degree == 0 ? 1.0 : 0.0)));
  }
  return worst;
}

double reciprocity_residual(const InterpOp1D& c2f, const InterpOp1D& f2c, std::span<const double> aFine,
                            std::span<const double> aCoarse) {
  const int nF = c2f.nOut, nC = c2f.nIn;
  if (f2c.nIn != nF || f2c.nOut != nC || static_cast<int>(aFine.size()) != nF || static_cast<int>(aCoarse.size()) != nC)
    throw std::length_error("reciprocity_residual: dimension mismatch");
  std::vector<double> diff(static_cast<std::size_t>(nF) * nC, 0.0);
  for (int j = 0; j < nF; ++j) {
    const InterpRow& row = c2f.rows[j];
    for (std::size_t t = 0; t < row.idx.size(); ++t) diff[j * nC + wrap(row.idx[t], nC)] += aFine[j] * row.w[t];
  }
  for (int i = 0; i < nC; ++i) {
    const InterpRow& row = f2c.rows[i];
    for (std::size_t t = 0; t < row.idx.size(); ++t) diff[wrap(row.idx[t], nF) * nC + i] -= aCoarse[i] * row.w[t];
  }
  double worst = 0.0;
  for (double d : diff) worst = std::max(worst, std::abs(d));
  return worst;
}

double row_sum_residual(const InterpOp1D& op) {
  double worst = 0.0;
  for (const InterpRow& r : op.rows) worst = std::max(worst, std::abs(std::accumulate(r.w.begin(), r.w.end(), 0.0) - 1.0));
  return worst;
}

}  // namespace elastodyne::interp
