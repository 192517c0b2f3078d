#pragma once

#include <array>
#include <span>
#include <vector>

#include "elastodyne/rational.hpp"

namespace elastodyne::sbp {

enum class Side { left, right };

/// One row of a banded operator: `count` taps starting at input index `start`.
template <typename T>
struct BandRowT {
  int start = 0;
  int count = 0;
  std::array<T, 5> coef{};
};
using BandRow = BandRowT<double>;

/// Fourth-order staggered SBP family on an interval.
///
/// The N-grid holds nN points including both boundary points; the M-grid holds
/// the nN - 1 interlaced half points. `dN` maps N-grid values to M-grid
/// derivatives, `dM` maps M-grid values to N-grid derivatives. Both are stored
/// as one row descriptor per output point (closure rows at each end, the
/// standard [1/24, -9/8, 9/8, -1/24]/dx stencil elsewhere), so application is O(n).
///
/// The family satisfies  aN * dM + (aM * dN)^T = -eL pL^T + eR pR^T  exactly.
class SbpSet1D {
 public:
  /// Smallest N-grid size for which the two boundary closures stay disjoint.
  static constexpr int kMinPoints = 9;
  /// Boundary projection taps (unit-free) for an M-grid field: pL = [15/8, -5/4, 3/8, 0, ...].
  static constexpr std::array<double, 3> kProjection = {15.0 / 8.0, -5.0 / 4.0, 3.0 / 8.0};

  SbpSet1D(int nN, double dx);

  int nN() const { return nN_; }
  int nM() const { return nN_ - 1; }
  double dx() const { return dx_; }

  std::span<const BandRow> dN_rows() const { return dN_; }
  std::span<const BandRow> dM_rows() const { return dM_; }
  std::span<const double> aN() const { return aN_; }
  std::span<const double> aM() const { return aM_; }

  /// Dense view of the projection functionals on the M-grid (zero away from the ends).
  double pL(int m) const { return m < 3 ? kProjection[m] : 0.0; }
  double pR(int m) const {
    const int r = nM() - 1 - m;
    return r >= 0 && r < 3 ? kProjection[r] : 0.0;
  }

  std::vector<double> apply_dN(std::span<const double> u) const;
  std::vector<double> apply_dM(std::span<const double> u) const;
  void apply_dN(std::span<const double> u, std::span<double> out) const;
  void apply_dM(std::span<const double> u, std::span<double> out) const;

  /// Extrapolated boundary value pL.u or pR.u of an M-grid field.
  double project_boundary(std::span<const double> uM, Side side) const;

  /// max |Q - (-eL pL^T + eR pR^T)| with Q = aN dM + (aM dN)^T.
  double sbp_identity_residual() const;

  /// Adds `delta` to tap `tap` of dN row `row` (fault injection for self-tests only).
  void perturb_dN(int row, int tap, double delta);

 private:
  int nN_;
  double dx_;
  std::vector<BandRow> dN_;  // nM rows
  std::vector<BandRow> dM_;  // nN rows
  std::vector<double> aN_;
  std::vector<double> aM_;
};

/// Exact unit-spacing operators in rational arithmetic.
struct ExactSbp {
  std::vector<BandRowT<Rational>> dN;
  std::vector<BandRowT<Rational>> dM;
  std::vector<Rational> aN;
  std::vector<Rational> aM;
};

ExactSbp build_exact_sbp(int nN);

/// Identity residual evaluated in exact arithmetic at unit spacing; zero for a correct table.
Rational sbp_identity_residual_exact(int nN);

}  // namespace elastodyne::sbp
