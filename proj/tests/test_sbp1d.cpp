#include <doctest.h>

#include <cmath>
#include <vector>

#include "elastodyne/sbp1d.hpp"

using elastodyne::Rational;
using namespace elastodyne::sbp;

namespace {

std::vector<double> sample_N(int n, double dx, auto f) {
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = f(i * dx);
  return u;
}

std::vector<double> sample_M(int n, double dx, auto f) {
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) u[i] = f((i + 0.5) * dx);
  return u;
}

}  // namespace

TEST_CASE("construction validates size and spacing") {
  CHECK_THROWS_AS(SbpSet1D(8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SbpSet1D(13, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SbpSet1D(13, -1.0), std::invalid_argument);
  CHECK_NOTHROW(SbpSet1D(9, 1.0));
}

TEST_CASE("closure coefficients and norm weights") {
  SbpSet1D s(13, 1.0);
  auto r0 = s.dN_rows()[0];
  CHECK(r0.start == 0);
  CHECK(r0.coef[0] == doctest::Approx(-79.0 / 78).epsilon(1e-15));
  CHECK(r0.coef[1] == doctest::Approx(27.0 / 26).epsilon(1e-15));
  CHECK(r0.coef[2] == doctest::Approx(-1.0 / 26).epsilon(1e-15));
  CHECK(r0.coef[3] == doctest::Approx(1.0 / 78).epsilon(1e-15));
  const double aN[] = {7.0 / 18, 9.0 / 8, 1.0, 71.0 / 72, 1.0};
  for (int i = 0; i < 5; ++i) CHECK(s.aN()[i] == doctest::Approx(aN[i]).epsilon(1e-15));

  SbpSet1D h(13, 0.5);
  CHECK(h.dN_rows()[0].coef[0] == doctest::Approx(-2 * 79.0 / 78).epsilon(1e-15));
  CHECK(h.aN()[0] == doctest::Approx(7.0 / 36).epsilon(1e-15));
  CHECK(h.aN()[1] == doctest::Approx(9.0 / 16).epsilon(1e-15));

  // interior weights are exactly dx, interior rows the standard stencil
  for (int i = 4; i < 13 - 4; ++i) CHECK(h.aN()[i] == 0.5);
  for (int i = 3; i < 12 - 3; ++i) CHECK(h.aM()[i] == 0.5);
  auto mid = h.dN_rows()[6];
  CHECK(mid.start == 5);
  CHECK(mid.coef[1] == -9.0 / 8 * 2);
}

TEST_CASE("apply_dN on low-degree data") {
  SbpSet1D s(13, 1.0);
  auto d0 = s.apply_dN(sample_N(13, 1.0, [](double) { return 1.0; }));
  for (double v : d0) CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  auto d1 = s.apply_dN(sample_N(13, 1.0, [](double x) { return x; }));
  for (double v : d1) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));

  // Rational oracle: row 0 on (0,1,4,9) = 81/78 - 4/26 + 9/78 = 1.
  const Rational oracle = Rational(-79, 78) * 0 + Rational(27, 26) * 1 + Rational(-1, 26) * 4 + Rational(1, 78) * 9;
  REQUIRE(oracle == Rational(1));
  auto d2 = s.apply_dN(sample_N(13, 1.0, [](double x) { return x * x; }));
  CHECK(d2[0] == doctest::Approx(1.0).epsilon(1e-14));
  for (int m = 3; m < 12 - 3; ++m) CHECK(d2[m] == doctest::Approx(2 * (m + 0.5)).epsilon(1e-14));

  CHECK_THROWS_AS(s.apply_dN(std::vector<double>(12)), std::length_error);
}

TEST_CASE("apply_dM on low-degree data") {
  const double dx = 0.25;
  SbpSet1D s(21, dx);
  auto d0 = s.apply_dM(sample_M(20, dx, [](double) { return 3.0; }));
  for (double v : d0) CHECK(std::abs(v) < 1e-12);
  auto d1 = s.apply_dM(sample_M(20, dx, [](double x) { return x; }));
  for (double v : d1) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
  auto d3 = s.apply_dM(sample_M(20, dx, [](double x) { return x * x * x; }));
  for (int i = 4; i < 21 - 4; ++i) {
    const double x = i * dx;
    CHECK(d3[i] == doctest::Approx(3 * x * x).epsilon(1e-13));
  }
  CHECK_THROWS_AS(s.apply_dM(std::vector<double>(21)), std::length_error);
}

TEST_CASE("interior rows exact through degree 4") {
  const double dx = 0.5;
  SbpSet1D s(17, dx);
  auto f = [](double x) { return x * x * x * x - 2 * x * x * x + x; };
  auto df = [](double x) { return 4 * x * x * x - 6 * x * x + 1; };
  auto dN = s.apply_dN(sample_N(17, dx, f));
  for (int m = 3; m < 16 - 3; ++m) CHECK(dN[m] == doctest::Approx(df((m + 0.5) * dx)).epsilon(1e-12));
  auto dM = s.apply_dM(sample_M(16, dx, f));
  for (int i = 4; i < 17 - 4; ++i) CHECK(dM[i] == doctest::Approx(df(i * dx)).epsilon(1e-12));
}

TEST_CASE("boundary rows exact on linears at both ends") {
  for (int n : {9, 13, 21}) {
    SbpSet1D s(n, 0.7);
    auto f = [](double x) { return 2.5 - 4 * x; };
    for (double v : s.apply_dN(sample_N(n, 0.7, f))) CHECK(v == doctest::Approx(-4.0).epsilon(1e-13));
    for (double v : s.apply_dM(sample_M(n - 1, 0.7, f))) CHECK(v == doctest::Approx(-4.0).epsilon(1e-13));
  }
}

TEST_CASE("project_boundary") {
  SbpSet1D s(13, 1.0);
  CHECK(s.project_boundary(std::vector<double>(12, 4.2), Side::left) == doctest::Approx(4.2).epsilon(1e-15));
  CHECK(s.project_boundary(std::vector<double>(12, 4.2), Side::right) == doctest::Approx(4.2).epsilon(1e-15));
  CHECK(s.project_boundary(sample_M(12, 1.0, [](double x) { return x; }), Side::left) == 0.0);
  std::vector<double> e0(12, 0.0);
  e0[0] = 1.0;
  CHECK(s.project_boundary(e0, Side::left) == 15.0 / 8);
  CHECK(s.project_boundary(e0, Side::right) == 0.0);
  // exact on quadratics at either end
  auto q = [](double x) { return 1 + x - 0.3 * x * x; };
  auto u = sample_M(12, 1.0, q);
  CHECK(s.project_boundary(u, Side::left) == doctest::Approx(q(0.0)).epsilon(1e-14));
  CHECK(s.project_boundary(u, Side::right) == doctest::Approx(q(12.0)).epsilon(1e-14));
  CHECK_THROWS_AS(s.project_boundary(std::vector<double>(13), Side::left), std::length_error);
}

TEST_CASE("SBP identity holds") {
  for (int n : {9, 13, 21, 64}) {
    CHECK(SbpSet1D(n, 1.0).sbp_identity_residual() <= 1e-14);
    CHECK(SbpSet1D(n, 2.0).sbp_identity_residual() <= 1e-14);
    CHECK(sbp_identity_residual_exact(n) == Rational(0));
  }
}

TEST_CASE("identity residual detects a corrupted coefficient") {
  SbpSet1D s(13, 1.0);
  s.perturb_dN(0, 0, 1e-3);
  // Q(0,0) moves by aM[0]*1e-3 = 13/12 * 1e-3.
  CHECK(s.sbp_identity_residual() == doctest::Approx(1.0833333333333333e-3).epsilon(1e-9));
  CHECK_THROWS_AS(s.perturb_dN(0, 4, 1.0), std::out_of_range);
}

TEST_CASE("norm weights positive with documented minima") {
  SbpSet1D s(9, 3.0);
  double minN = 1e300, minM = 1e300;
  for (double a : s.aN()) minN = std::min(minN, a);
  for (double a : s.aM()) minM = std::min(minM, a);
  CHECK(minN == doctest::Approx(7.0 / 18 * 3.0));
  CHECK(minM == doctest::Approx(7.0 / 8 * 3.0));
}
