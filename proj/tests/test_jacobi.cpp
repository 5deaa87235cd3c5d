// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "perispec/errors.hpp"
#include "perispec/jacobi.hpp"
#include "perispec/quadrature.hpp"
#include "test_util.hpp"

using namespace perispec;

namespace {
const PeriodicJacobi kFree({1.0}, {0.0});
const PeriodicJacobi kFreeP2({1.0, 1.0}, {0.0, 0.0});
const PeriodicJacobi kGapP2({1.0, 2.0}, {0.0, 0.0});
}  // namespace

TEST_CASE("transfer_step") {
  Mobius2 t = transfer_step(1.0, 0.0, 0.0);
  CHECK(t.t11 == cdouble(0.0));
  CHECK(t.t12 == cdouble(-1.0));
  CHECK(t.t21 == cdouble(1.0));
  CHECK(t.t22 == cdouble(0.0));

  CHECK(std::abs(transfer_step(2.0, 1.0, {3.0, 1.0}).det() - 1.0) < 1e-15);

  // a = 2, b = 0: (1/2) [[x, -1], [4, 0]] at a few x
  for (double x : {-1.5, 0.3, 2.0}) {
    Mobius2 s = transfer_step(2.0, 0.0, x);
    CHECK(s.t11 == cdouble(x / 2.0));
    CHECK(s.t12 == cdouble(-0.5));
    CHECK(s.t21 == cdouble(2.0));
    CHECK(s.t22 == cdouble(0.0));
  }

  CHECK_THROWS_AS(transfer_step(-1.0, 0.0, 0.0), InputError);
}

TEST_CASE("discriminant: free, free-as-period-2, open gap") {
  Discriminant d1 = discriminant_oprl(kFree);
  CHECK(d1.poly.coeffs() == std::vector<double>{0.0, 1.0});

  Discriminant d2 = discriminant_oprl(kFreeP2);
  CHECK(d2.poly.coeffs() == std::vector<double>{-2.0, 0.0, 1.0});

  Discriminant d3 = discriminant_oprl(kGapP2);  // (x^2 - 5)/2
  CHECK(d3.poly.coeff(0) == doctest::Approx(-2.5).epsilon(1e-15));
  CHECK(d3.poly.coeff(1) == 0.0);
  CHECK(d3.poly.coeff(2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("discriminant leading coefficients on random operators") {
  std::mt19937 rng(21);
  for (int p = 1; p <= 7; ++p) {
    PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
    Discriminant d = discriminant_oprl(j0);
    CHECK(d.poly.degree() == p);
    double prod = 1.0, bsum = 0.0;
    for (int i = 0; i < p; ++i) {
      prod *= j0.a[i];
      bsum += j0.b[i];
    }
    CHECK(d.poly.coeff(p) == doctest::Approx(1.0 / prod).epsilon(1e-12));
    if (p >= 1)
      CHECK(d.poly.coeff(p - 1) == doctest::Approx(-bsum / prod).epsilon(1e-12));
    CHECK(d.capacity == doctest::Approx(std::pow(prod, 1.0 / p)).epsilon(1e-13));
  }
}

TEST_CASE("bands: stated examples") {
  BandSet b1 = bands(discriminant_oprl(kFree));
  REQUIRE(b1.bands.size() == 1);
  CHECK(b1.bands[0].first == doctest::Approx(-2.0));
  CHECK(b1.bands[0].second == doctest::Approx(2.0));
  CHECK(b1.open_gaps.empty());

  BandSet b2 = bands(discriminant_oprl(kFreeP2));
  REQUIRE(b2.bands.size() == 2);
  CHECK(b2.bands[0].second == doctest::Approx(0.0));
  CHECK(b2.bands[1].first == doctest::Approx(0.0));
  REQUIRE(b2.closed_gaps.size() == 1);
  CHECK(b2.closed_gaps[0] == doctest::Approx(0.0));

  BandSet b3 = bands(discriminant_oprl(kGapP2));
  REQUIRE(b3.bands.size() == 2);
  CHECK(b3.bands[0].first == doctest::Approx(-3.0));
  CHECK(b3.bands[0].second == doctest::Approx(-1.0));
  CHECK(b3.bands[1].first == doctest::Approx(1.0));
  CHECK(b3.bands[1].second == doctest::Approx(3.0));
  REQUIRE(b3.open_gaps.size() == 1);
  CHECK(b3.open_gaps[0].first == doctest::Approx(-1.0));
  CHECK(b3.open_gaps[0].second == doctest::Approx(1.0));
}

TEST_CASE("capacity examples") {
  CHECK(capacity(kFree) == 1.0);
  CHECK(capacity(kGapP2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(capacity(PeriodicJacobi({1.0, 1.0, 8.0}, {0.0, 0.0, 0.0})) ==
        doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("harmonic density and band masses") {
  Discriminant d = discriminant_oprl(kFree);
  CHECK(harmonic_density(d, 0.0) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
  CHECK(harmonic_density(d, 2.0 - 1e-8) > 100.0 * harmonic_density(d, 0.0));
  CHECK_THROWS_AS(harmonic_density(d, 2.5), EvalDomainError);

  // one band of the free-as-period-2 operator carries mass 1/2
  Discriminant d2 = discriminant_oprl(kFreeP2);
  BandSet b2 = bands(d2);
  CHECK(band_mass(d2, b2.bands[0]) == doctest::Approx(0.5).epsilon(1e-7));

  std::mt19937 rng(5);
  for (int p : {1, 2, 3, 5}) {
    PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
    Discriminant d3 = discriminant_oprl(j0);
    for (const auto& band : bands(d3).bands)
      CHECK(band_mass(d3, band) == doctest::Approx(1.0 / p).epsilon(2e-6));
  }
}

TEST_CASE("lyapunov exponent") {
  Discriminant d = discriminant_oprl(kFree);
  CHECK(lyapunov(d, {2.5, 0.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-13));
  CHECK(lyapunov(d, {1.0, 0.0}) == doctest::Approx(0.0));

  Discriminant d2 = discriminant_oprl(kFreeP2);
  CHECK(lyapunov(d2, {3.0, 0.0}) ==
        doctest::Approx(0.5 * lyapunov(d, {7.0, 0.0})).epsilon(1e-13));

  std::mt19937 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, 3);
    Discriminant dd = discriminant_oprl(j0);
    BandSet bs = bands(dd);
    for (const auto& band : bs.bands) {
      double mid = 0.5 * (band.first + band.second);
      CHECK(std::abs(lyapunov(dd, {mid, 0.0})) <= 1e-10);
    }
    CHECK(lyapunov(dd, {bs.bands.back().second + 1.0, 0.0}) > 0.0);
  }
}

TEST_CASE("floquet fibers solve Delta = 2 cos theta") {
  auto eigs = [](const PeriodicJacobi& j0, double theta) {
    return herm_eigen(floquet_fiber(j0, theta), false).values;
  };
  auto e1 = eigs(kFreeP2, M_PI);
  CHECK(e1[0] == doctest::Approx(0.0));
  CHECK(e1[1] == doctest::Approx(0.0));
  auto e2 = eigs(kFreeP2, 0.0);
  CHECK(e2[0] == doctest::Approx(-2.0));
  CHECK(e2[1] == doctest::Approx(2.0));
  auto e3 = eigs(kGapP2, M_PI / 2.0);
  CHECK(e3[0] == doctest::Approx(-std::sqrt(5.0)));
  CHECK(e3[1] == doctest::Approx(std::sqrt(5.0)));

  std::mt19937 rng(23);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
  for (int p : {1, 2, 4, 6}) {
    PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
    Discriminant d = discriminant_oprl(j0);
    for (int k = 0; k < 50; ++k) {
      double theta = ut(rng);
      for (double x : eigs(j0, theta))
        CHECK(std::abs(d.poly(x) - 2.0 * std::cos(theta)) <= 1e-9);
    }
  }
}

TEST_CASE("periodic m-function: free case and Herglotz branch") {
  std::complex<double> m3 = periodic_m(kFree, {3.0, 0.0});
  CHECK(m3.real() == doctest::Approx((-3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
  CHECK(std::abs(m3.imag()) < 1e-13);
  // m solves m^2 + 3m + 1 = 0
  CHECK(std::abs(m3 * m3 + 3.0 * m3 + 1.0) < 1e-12);

  std::complex<double> mc = periodic_m(kFree, {2.0, 0.1});
  CHECK(mc.imag() > 0.0);
}

TEST_CASE("periodic m-function: quadratic identity on a grid") {
  std::mt19937 rng(31);
  for (int p : {1, 2, 3, 5}) {
    PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
    Discriminant d = discriminant_oprl(j0);
    BandSet bs = bands(d);
    double lo = bs.bands.front().first, hi = bs.bands.back().second;
    for (int k = 0; k < 100; ++k) {
      // off-spectrum grid: circle in the upper half plane plus real points
      std::complex<double> e =
          (k % 2 == 0) ? std::complex<double>(lo - 2.0 + 0.04 * k, 0.0)
                       : std::complex<double>(lo + (hi - lo) * k / 100.0, 0.7);
      if (e.imag() == 0.0 && e.real() > lo - 0.05) continue;
      MQuadratic q = m_quadratic(j0, e);
      std::complex<double> m = periodic_m(j0, e);
      CHECK(std::abs(q.A * m * m + q.B * m + q.C) <= 1e-10);
      std::complex<double> delta = d.poly(e);
      std::complex<double> lhs = q.B * q.B - 4.0 * q.A * q.C;
      CHECK(std::abs(lhs - (delta * delta - 4.0)) <= 1e-10 * std::max(1.0, std::abs(lhs)));
      if (e.imag() > 0.0) CHECK(m.imag() > 0.0);
    }
  }
}

TEST_CASE("spectral weight integrates band mass") {
  // Im m(x+i0)/pi is the spectral density of the half-line operator; inside
  // a band it is strictly positive.
  Discriminant d = discriminant_oprl(kGapP2);
  BandSet bs = bands(d);
  double x = 0.5 * (bs.bands[1].first + bs.bands[1].second);
  CHECK(m_weight(kGapP2, x) > 0.0);
}

TEST_CASE("zero-counting measure") {
  JacobiSeq seq = JacobiSeq::from_periodic(kFree, 1, 64, false);
  PointMeasure m1 = zero_measure(seq, 1);
  CHECK(m1.points[0] == doctest::Approx(0.0));
  CHECK(m1.weights[0] == 1.0);

  PointMeasure m2 = zero_measure(seq, 2);
  CHECK(m2.points[0] == doctest::Approx(-1.0));
  CHECK(m2.points[1] == doctest::Approx(1.0));
  CHECK(m2.weights[0] == 0.5);
}

TEST_CASE("harmonic moments match the arcsine law for the free operator") {
  // arcsine moments on [-2,2]: m2 = 2, m4 = 6, odd vanish
  CHECK(harmonic_moment(kFree, 1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(harmonic_moment(kFree, 2) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(harmonic_moment(kFree, 4) == doctest::Approx(6.0).epsilon(1e-10));
}
