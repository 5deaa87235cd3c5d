// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "perispec/errors.hpp"
#include "perispec/magic.hpp"
#include "perispec/torus.hpp"
#include "test_util.hpp"

using namespace perispec;

namespace {

// Dense oracle: polynomial of the full window matrix, no banded bookkeeping.
Matrix dense_poly_of_window(const JacobiSeq& seq, const RealPoly& poly) {
  const int n = static_cast<int>(seq.b.size());
  Matrix j(n, n);
  for (int i = 0; i < n; ++i) j(i, i) = seq.b[i];
  for (int i = 0; i + 1 < n; ++i) {
    j(i, i + 1) = seq.a[i];
    j(i + 1, i) = seq.a[i];
  }
  Matrix acc(n, n);
  for (int i = 0; i < n; ++i) acc(i, i) = poly.coeff(poly.degree());
  for (int k = poly.degree() - 1; k >= 0; --k) {
    acc = acc * j;
    for (int i = 0; i < n; ++i) acc(i, i) += poly.coeff(k);
  }
  return acc;
}

}  // namespace

TEST_CASE("apply_poly: identity polynomial returns the operator window") {
  PeriodicJacobi free({1.0}, {0.0});
  JacobiSeq seq = JacobiSeq::from_periodic(free, 1, 12, false);
  BandedWindow w = apply_poly(seq, discriminant_oprl(free));
  CHECK(w.bandwidth() == 1);
  CHECK(w.margin_lo() == 0);  // genuine half-line edge
  CHECK(w.margin_hi() == 1);
  for (long i = 1; i <= 10; ++i) {
    CHECK(w.entry(i, i) == cdouble(0.0));
    CHECK(w.entry(i, i + 1) == cdouble(1.0));
  }
}

TEST_CASE("apply_poly: free operator as period 2") {
  PeriodicJacobi free2({1.0, 1.0}, {0.0, 0.0});
  JacobiSeq seq = JacobiSeq::from_periodic(free2, 1, 14, false);
  BandedWindow w = apply_poly(seq, discriminant_oprl(free2));  // J^2 - 2
  for (long i = w.exact_lo(); i <= w.exact_hi(); ++i) {
    CHECK(std::abs(w.entry(i, i) - cdouble(i == 1 ? -1.0 : 0.0)) < 1e-15);
    if (i + 2 <= w.exact_hi()) CHECK(std::abs(w.entry(i, i + 2) - cdouble(1.0)) < 1e-15);
  }
  CHECK_THROWS_AS(apply_poly(JacobiSeq::from_periodic(free2, 1, 5, false),
                             discriminant_oprl(free2)),
                  InputError);
}

TEST_CASE("apply_poly: interior entries match the dense oracle") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> ua(0.6, 1.5), ub(-0.8, 0.8);
  for (int p : {2, 3, 5}) {
    PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
    Discriminant d = discriminant_oprl(j0);
    JacobiSeq seq;
    seq.offset = 1;
    for (int k = 0; k < 8 * p; ++k) {
      seq.a.push_back(ua(rng));
      seq.b.push_back(ub(rng));
    }
    BandedWindow w = apply_poly(seq, d);
    Matrix dense = dense_poly_of_window(seq, d.poly);
    for (long i = w.exact_lo(); i <= w.exact_hi(); ++i)
      for (long j = std::max<long>(1, i - p); j <= std::min<long>(seq.hi(), i + p); ++j)
        CHECK(std::abs(w.entry(i, j) - dense(static_cast<int>(i - 1), static_cast<int>(j - 1))) <
              1e-11);
  }
}

TEST_CASE("square entries follow the two off-diagonal closed forms") {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> ua(0.6, 1.5), ub(-0.8, 0.8);
  JacobiSeq seq;
  seq.offset = 1;
  for (int k = 0; k < 24; ++k) {
    seq.a.push_back(ua(rng));
    seq.b.push_back(ub(rng));
  }
  RealPoly x2 = RealPoly::x() * RealPoly::x();
  Matrix sq = dense_poly_of_window(seq, x2);
  for (int m = 1; m <= 20; ++m) {
    CHECK(std::abs(sq(m - 1, m + 1) - cdouble(seq.a_at(m) * seq.a_at(m + 1))) < 1e-13);
    CHECK(std::abs(sq(m - 1, m) - cdouble(seq.a_at(m) * (seq.b_at(m) + seq.b_at(m + 1)))) <
          1e-13);
  }
}

TEST_CASE("magic residual vanishes on the reference operator") {
  std::mt19937 rng(47);
  for (int p = 1; p <= 6; ++p) {
    PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
    JacobiSeq seq = JacobiSeq::from_periodic(j0, 1, 6 * p + 4, false);
    ResidualReport rep = magic_residual(seq, j0);
    CHECK(rep.sup <= 1e-10);
  }
}

TEST_CASE("magic residual of the single-bond perturbation of the free case") {
  // two-sided free as period 2 with a_0 = 1.1
  JacobiSeq seq;
  seq.two_sided = true;
  seq.offset = -10;
  for (long n = -10; n <= 10; ++n) {
    seq.a.push_back(n == 0 ? 1.1 : 1.0);
    seq.b.push_back(0.0);
  }
  PeriodicJacobi free2({1.0, 1.0}, {0.0, 0.0});
  Discriminant d = discriminant_oprl(free2);
  BandedWindow w = apply_poly(seq, d);
  w.subtract_shift_pair(2);
  // diagonal entry at sites 0 and 1: a_{n-1}^2 + a_n^2 - 2 = 0.21
  CHECK(std::abs(w.entry(0, 0) - cdouble(0.21)) < 1e-14);
  CHECK(std::abs(w.entry(1, 1) - cdouble(0.21)) < 1e-14);
  // distance-2 entries at the two neighboring positions: a_n a_{n+1} - 1 = 0.1
  CHECK(std::abs(w.entry(-1, 1) - cdouble(0.1)) < 1e-14);
  CHECK(std::abs(w.entry(0, 2) - cdouble(0.1)) < 1e-14);
  // distance-1 entries vanish (b = 0)
  CHECK(std::abs(w.entry(0, 1)) < 1e-14);
  CHECK(std::abs(w.entry(-1, 0)) < 1e-14);
}

TEST_CASE("magic residual for OPUC references") {
  std::mt19937 rng(53);
  for (int p : {2, 4, 6}) {
    PeriodicVerblunsky v0 = testutil::random_periodic_verblunsky(rng, p);
    VerblunskySeq seq = v0.window(0, 10 * p + 8, false);
    ResidualReport rep = magic_residual(seq, v0);
    CHECK(rep.sup <= 1e-10);
  }
}

TEST_CASE("OPUC perturbation shows up on the extreme diagonals") {
  std::mt19937 rng(59);
  PeriodicVerblunsky v0 = testutil::random_periodic_verblunsky(rng, 4);
  VerblunskySeq seq = v0.window(0, 60, false);
  seq.alpha[13] += 0.25;
  if (std::abs(seq.alpha[13]) >= 0.95) seq.alpha[13] = 0.5;
  ResidualReport rep = magic_residual(seq, v0);
  double extreme = 0.0;
  for (double v : rep.diagonal.at(3)) extreme = std::max(extreme, v);
  for (double v : rep.diagonal.at(4)) extreme = std::max(extreme, v);
  CHECK(extreme >= 1e-3);
}

TEST_CASE("extract_blocks: reference operator gives A = 1, B = 0") {
  std::mt19937 rng(61);
  PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, 3);
  JacobiSeq seq = JacobiSeq::from_periodic(j0, 1, 24, false);
  BandedWindow w = apply_poly(seq, discriminant_oprl(j0));
  BlockSeq blocks = extract_blocks(w, 3);
  REQUIRE(blocks.B.size() >= 3);
  // block 1 carries the half-line edge correction; the identity holds beyond
  for (std::size_t n = 1; n < blocks.A.size(); ++n) {
    CHECK((blocks.A[n] - Matrix::identity(3)).max_abs() < 1e-11);
    CHECK(blocks.B[n].max_abs() < 1e-11);
  }
  CHECK(blocks.B[0].max_abs() > 0.01);
}

TEST_CASE("extract_blocks: lower-triangular positive A for generic operators") {
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> ua(0.6, 1.5), ub(-0.8, 0.8);
  PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, 3);
  JacobiSeq seq;
  seq.offset = 1;
  for (int k = 0; k < 30; ++k) {
    seq.a.push_back(ua(rng));
    seq.b.push_back(ub(rng));
  }
  BandedWindow w = apply_poly(seq, discriminant_oprl(j0));
  BlockSeq blocks = extract_blocks(w, 3);
  for (const auto& a : blocks.A) CHECK(is_lower_triangular_positive(a, 1e-11));
  for (const auto& b : blocks.B) CHECK(b.hermiticity_defect() < 1e-11);

  // corner entries against the closed forms
  for (std::size_t n = 0; n < blocks.A.size(); ++n) {
    long m = 1 + 3 * static_cast<long>(n);
    FastEntries fe = fast_block_entries(seq, j0, m);
    CHECK(std::abs(blocks.A[n](0, 0) - cdouble(fe.outer)) < 1e-12);
  }
}

TEST_CASE("extract_blocks: structural violation is detected") {
  BandedWindow w(1, 12, 5, true, false);
  for (long i = 1; i <= 12; ++i) w.at(i, i) = 1.0;
  w.at(3, 8) = 0.5;  // distance 5, two blocks apart for p = 2
  CHECK_THROWS_AS(extract_blocks(w, 2, 1e-11), StructuralError);
}

TEST_CASE("fast block entries: reference and perturbed values") {
  PeriodicJacobi free2({1.0, 1.0}, {0.0, 0.0});
  JacobiSeq ref = JacobiSeq::from_periodic(free2, 1, 12, false);
  FastEntries fe = fast_block_entries(ref, free2, 1);
  CHECK(fe.outer == doctest::Approx(1.0));
  CHECK(fe.subouter == doctest::Approx(0.0));

  JacobiSeq pert = ref;
  pert.a[0] = 1.1;
  FastEntries fp = fast_block_entries(pert, free2, 1);
  CHECK(fp.outer == doctest::Approx(1.1).epsilon(1e-15));

  // against apply_poly interior entries on a random sequence
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> ua(0.6, 1.5), ub(-0.8, 0.8);
  JacobiSeq seq;
  seq.offset = 1;
  for (int k = 0; k < 24; ++k) {
    seq.a.push_back(ua(rng));
    seq.b.push_back(ub(rng));
  }
  BandedWindow w = apply_poly(seq, discriminant_oprl(free2));
  for (long m = 1; m <= 16; ++m) {
    FastEntries f = fast_block_entries(seq, free2, m);
    CHECK(std::abs(w.entry(m, m + 2) - cdouble(f.outer)) < 1e-12);
    CHECK(std::abs(w.entry(m, m + 1) - cdouble(f.subouter)) < 1e-12);
  }
}

TEST_CASE("square summability report vanishes on the reference operator") {
  std::mt19937 rng(73);
  PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, 2);
  JacobiSeq seq = JacobiSeq::from_periodic(j0, 1, 400, false);
  SquareSummabilityReport rep = square_summability_report(seq, j0, 40);
  CHECK(rep.hs.back() < 1e-18);
  CHECK(rep.block_l2.back() < 1e-18);
  CHECK(rep.abs_block_l2.back() < 1e-18);
  CHECK(rep.g_block.back() < 1e-18);
  CHECK(rep.dist_sq.back() < 1e-18);
  CHECK(rep.tilde_dist_sq.back() < 1e-18);
  CHECK(rep.a_shift_sq.back() < 1e-18);
}

TEST_CASE("square summability quantities are finite together on a decaying family") {
  // a_n = 1 + 2^{-n} toward the free case, b = 0
  JacobiSeq seq;
  seq.offset = 1;
  for (int n = 1; n <= 300; ++n) {
    seq.a.push_back(1.0 + std::pow(2.0, -std::min(n, 40)));
    seq.b.push_back(0.0);
  }
  PeriodicJacobi free2({1.0, 1.0}, {0.0, 0.0});
  SquareSummabilityReport rep = square_summability_report(seq, free2, 30);
  auto settled = [](const std::vector<double>& s) {
    return s.back() - s[s.size() - 2] < 1e-10 && s.back() > 0.0;
  };
  CHECK(settled(rep.hs));
  CHECK(settled(rep.block_l2));
  CHECK(settled(rep.abs_block_l2));
  CHECK(settled(rep.g_block));
  CHECK(settled(rep.dist_sq));
  CHECK(settled(rep.tilde_dist_sq));
  // pairwise comparability of the four block quantities
  double ratio1 = rep.hs.back() / rep.block_l2.back();
  double ratio2 = rep.block_l2.back() / rep.abs_block_l2.back();
  double ratio3 = rep.abs_block_l2.back() / rep.g_block.back();
  for (double r : {ratio1, ratio2, ratio3}) {
    CHECK(r > 0.05);
    CHECK(r < 20.0);
  }
}

TEST_CASE("diagonal decomposition and commutator residual") {
  std::mt19937 rng(79);
  PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, 3);
  JacobiSeq seq = JacobiSeq::from_periodic(j0, -15, 18, true);
  BandedWindow w = apply_poly(seq, discriminant_oprl(j0));
  DiagonalDecomposition dd = naiman_decompose(w, 3);
  CHECK(dd.periodicity_residual <= 1e-10);
  CHECK(dd.commutator_residual <= 1e-10);

  // banded operator with p-periodic diagonals commutes exactly
  BandedWindow pw(-12, 12, 2, false, false);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::vector<double>> diag(5, std::vector<double>(3));
  for (auto& row : diag)
    for (auto& v : row) v = u(rng);
  for (long i = -12; i <= 12; ++i)
    for (int k = -2; k <= 2; ++k)
      if (i + k >= -12 && i + k <= 12)
        pw.at(i, i + k) = diag[k + 2][((i % 3) + 3) % 3];
  DiagonalDecomposition pd = naiman_decompose(pw, 3);
  CHECK(pd.periodicity_residual == 0.0);
  CHECK(pd.commutator_residual == 0.0);

  // breaking periodicity shows up in both residuals
  pw.at(0, 1) += 0.5;
  DiagonalDecomposition bd = naiman_decompose(pw, 3);
  CHECK(bd.periodicity_residual >= 0.4);
  CHECK(bd.commutator_residual >= 0.4);
}
