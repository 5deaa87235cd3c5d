// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "perispec/eigenbounds.hpp"
#include "perispec/errors.hpp"
#include "test_util.hpp"

using namespace perispec;

TEST_CASE("comparison sequence values") {
  BlockJacobi free = BlockJacobi::scalar({}, {});
  for (double b : comparison_b(free, +1)) CHECK(b == 0.0);

  BlockJacobi j;
  j.l = 2;
  Matrix b1(2, 2);
  b1(0, 0) = 1.0;
  b1(1, 1) = -1.0;
  j.B = {b1};
  j.A = {Matrix::identity(2)};
  auto bp = comparison_b(j, +1);
  auto bm = comparison_b(j, -1);
  CHECK(bp[0] == doctest::Approx(1.0));
  CHECK(bm[0] == doctest::Approx(-1.0));
  CHECK(bp[1] == doctest::Approx(0.0));

  BlockJacobi ja;
  ja.l = 2;
  Matrix a1(2, 2);
  a1(0, 0) = 2.0;
  a1(1, 1) = 1.0;
  ja.B = {Matrix::zero(2, 2)};
  ja.A = {a1};
  auto bpa = comparison_b(ja, +1);
  CHECK(bpa[0] == doctest::Approx(1.0));  // ||A_1 - 1|| = 1
  CHECK(bpa[1] == doctest::Approx(1.0));  // carried into the next site
}

TEST_CASE("operator sandwich on truncations") {
  BlockJacobi free = BlockJacobi::scalar({}, {});
  SandwichMargins mf = sandwich_check(free, 30);
  CHECK(mf.upper >= -1e-12);
  CHECK(mf.lower >= -1e-12);

  // explicit 2x2 block statement: the dilation of the coupling block sits
  // between +-(||A_1 - 1|| 1) with identity couplings; the norm identity
  // ||[[0, C],[C^dag, 0]]|| = ||C|| makes the difference positive.
  std::mt19937 rng(401);
  Matrix a = testutil::random_near_identity(rng, 2, 0.2);
  Matrix dil(4, 4), up(4, 4);
  double nrm = operator_norm(a - Matrix::identity(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      dil(i, 2 + j) = a(i, j);
      dil(2 + j, i) = std::conj(a(i, j));
      up(i, j) = (i == j) ? nrm : 0.0;
      up(2 + i, 2 + j) = (i == j) ? nrm : 0.0;
      up(i, 2 + j) = (i == j) ? 1.0 : 0.0;
      up(2 + j, i) = (i == j) ? 1.0 : 0.0;
    }
  auto eig = herm_eigen(up - dil, false);
  CHECK(eig.values.front() >= -1e-12);

  for (int trial = 0; trial < 50; ++trial) {
    int l = 1 + static_cast<int>(rng() % 3);
    int blocks = 2 + static_cast<int>(rng() % 9);
    BlockJacobi j = testutil::random_nevai_fixture(rng, l, blocks);
    SandwichMargins m = sandwich_check(j, 60);
    CHECK(m.upper >= -1e-10);
    CHECK(m.lower >= -1e-10);
  }
}

TEST_CASE("eigenvalue ordering against the comparison operators") {
  BlockJacobi free = BlockJacobi::scalar({}, {});
  EigenOrder of = eigen_order_check(free, 40);
  CHECK(of.outer_plus.empty());
  CHECK(of.outer_minus.empty());
  CHECK(of.ordered);

  // scalar equality case: the operator is its own upper comparison
  BlockJacobi big = BlockJacobi::scalar({}, {1.5});
  EigenOrder ob = eigen_order_check(big, 60);
  REQUIRE(ob.outer_plus.size() >= 1);
  CHECK(ob.outer_plus[0] == doctest::Approx(ob.bound_plus[0]).epsilon(1e-9));
  CHECK(ob.ordered);

  BlockJacobi two;
  two.l = 2;
  Matrix b(2, 2);
  b(0, 0) = 1.5;
  two.B = {b};
  two.A = {Matrix::identity(2)};
  EigenOrder ot = eigen_order_check(two, 60);
  CHECK(ot.outer_plus.size() == 1);
  CHECK(ot.bound_plus.size() == 2);
  CHECK(ot.bound_plus[0] == doctest::Approx(13.0 / 6.0).epsilon(1e-6));
  CHECK(ot.ordered);

  std::mt19937 rng(409);
  for (int trial = 0; trial < 50; ++trial) {
    int l = 1 + static_cast<int>(rng() % 3);
    BlockJacobi j = testutil::random_nevai_fixture(rng, l, 4);
    CHECK(eigen_order_check(j, 80).ordered);
  }
}

TEST_CASE("half-moment bound") {
  BlockJacobi free = BlockJacobi::scalar({}, {});
  HtBound hf = ht_bound(free);
  CHECK(hf.lhs == 0.0);
  CHECK(hf.rhs == 0.0);

  BlockJacobi b2 = BlockJacobi::scalar({}, {2.0});
  HtBound hb = ht_bound(b2);
  CHECK(hb.lhs == doctest::Approx(1.5).epsilon(1e-6));  // |t - 1/t| at t = 2
  CHECK(hb.rhs == doctest::Approx(4.0));
  CHECK(hb.lhs <= hb.rhs);

  std::mt19937 rng(419);
  for (int trial = 0; trial < 12; ++trial) {
    int l = 1 + static_cast<int>(rng() % 2);
    BlockJacobi j = testutil::random_nevai_fixture(rng, l, 3);
    HtBound h = ht_bound(j);
    CHECK(h.lhs <= h.rhs + 1e-9);
  }
}
