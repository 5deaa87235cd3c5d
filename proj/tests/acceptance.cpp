// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks.  Each criterion prints one PASS/FAIL line;
// the exit code is the number of failures.

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "perispec/blockjacobi.hpp"
#include "perispec/errors.hpp"
#include "perispec/eigenbounds.hpp"
#include "perispec/jacobi.hpp"
#include "perispec/magic.hpp"
#include "perispec/sumrules.hpp"
#include "perispec/torus.hpp"
#include "test_util.hpp"

using namespace perispec;
using cd = std::complex<double>;

namespace {

int g_failures = 0;

void report(int n, const char* desc, bool pass, const std::string& detail = "") {
  std::printf("criterion %02d %s  %s%s%s\n", n, pass ? "PASS" : "FAIL", desc,
              detail.empty() ? "" : "  -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename F>
void run(int n, const char* desc, F&& f) {
  try {
    auto [pass, detail] = f();
    report(n, desc, pass, detail);
  } catch (const std::exception& e) {
    report(n, desc, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Shared fixture library for the sum-rule criteria: rank-1/2/3 perturbations
// with block sizes 1..3, all eventually free.
std::vector<BlockJacobi> fixture_library() {
  std::vector<BlockJacobi> lib;
  lib.push_back(BlockJacobi::scalar({}, {0.5}));
  lib.push_back(BlockJacobi::scalar({}, {1.5}));
  lib.push_back(BlockJacobi::scalar({2.0}, {0.0, 0.0}));  // pure a_1 = 2
  lib.push_back(BlockJacobi::scalar({1.3, 0.8}, {0.4, -0.6, 0.2}));
  std::mt19937 rng(2024);
  lib.push_back(testutil::random_nevai_fixture(rng, 2, 1, 0.35));
  lib.push_back(testutil::random_nevai_fixture(rng, 2, 2, 0.3));
  lib.push_back(testutil::random_nevai_fixture(rng, 2, 3, 0.25));
  lib.push_back(testutil::random_nevai_fixture(rng, 3, 1, 0.3));
  lib.push_back(testutil::random_nevai_fixture(rng, 3, 2, 0.25));
  lib.push_back(testutil::random_nevai_fixture(rng, 3, 3, 0.2));
  lib.push_back(testutil::random_nevai_fixture(rng, 1, 4, 0.4));
  lib.push_back(testutil::random_nevai_fixture(rng, 2, 4, 0.2));
  return lib;
}

}  // namespace

int main() {
  // 1. shift identity on the reference operator, OPRL
  run(1, "shift identity (OPRL), 20 random operators p=1..6, sup <= 1e-10", [] {
    std::mt19937 rng(11);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      int p = 1 + trial % 6;
      PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
      JacobiSeq seq = JacobiSeq::from_periodic(j0, 1, 8 * p + 6, false);
      worst = std::max(worst, magic_residual(seq, j0).sup);
    }
    return std::pair{worst <= 1e-10, "sup=" + fmt(worst)};
  });

  // 2. shift identity, OPUC + the half-alpha discriminant
  run(2, "shift identity (OPUC) p=2,4,6 and the half-alpha discriminant", [] {
    std::mt19937 rng(13);
    double worst = 0.0;
    for (int p : {2, 4, 6})
      for (int trial = 0; trial < 4; ++trial) {
        PeriodicVerblunsky v0 = testutil::random_periodic_verblunsky(rng, p);
        VerblunskySeq seq = v0.window(0, 10 * p + 10, false);
        worst = std::max(worst, magic_residual(seq, v0).sup);
      }
    double coef_err = 0.0;
    for (double sgn : {1.0, -1.0}) {
      LaurentPoly d = discriminant_opuc(PeriodicVerblunsky({0.0, sgn * 0.5}));
      double c = std::sqrt(4.0 / 3.0);
      coef_err = std::max(coef_err, std::abs(d.coeff(1) - c));
      coef_err = std::max(coef_err, std::abs(d.coeff(-1) - c));
      coef_err = std::max(coef_err, std::abs(d.coeff(0)));
    }
    return std::pair{worst <= 1e-10 && coef_err <= 1e-12,
                     "sup=" + fmt(worst) + " coef_err=" + fmt(coef_err)};
  });

  // 3. Floquet fibers and band masses
  run(3, "fiber eigenvalues solve Delta=2cos(theta); band masses 1/p", [] {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * M_PI);
    double worst_fiber = 0.0, worst_mass = 0.0;
    for (int p : {1, 2, 3, 5}) {
      PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
      Discriminant d = discriminant_oprl(j0);
      for (int k = 0; k < 50; ++k) {
        double theta = ut(rng);
        for (double x : herm_eigen(floquet_fiber(j0, theta), false).values)
          worst_fiber = std::max(worst_fiber, std::abs(d.poly(x) - 2.0 * std::cos(theta)));
      }
      for (const auto& band : bands(d).bands)
        worst_mass = std::max(worst_mass, std::abs(band_mass(d, band, 1e-9) - 1.0 / p));
    }
    return std::pair{worst_fiber <= 1e-9 && worst_mass <= 1e-6,
                     "fiber=" + fmt(worst_fiber) + " mass=" + fmt(worst_mass)};
  });

  // 4. m-function quadratic identity and Herglotz sign
  run(4, "m-function: B^2-4AC = Delta^2-4 on a 100-point grid; Herglotz sign", [] {
    std::mt19937 rng(19);
    double worst = 0.0;
    bool herglotz = true;
    for (int p : {1, 2, 3, 4}) {
      PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
      Discriminant d = discriminant_oprl(j0);
      BandSet bs = bands(d);
      double lo = bs.bands.front().first, hi = bs.bands.back().second;
      for (int k = 0; k < 100; ++k) {
        // grid off the spectrum: just outside the outer edges and an
        // upper-half-plane sweep across the spectrum
        cd e;
        if (k % 4 == 0) e = cd(lo - 0.05 - 1.45 * k / 100.0, 0.0);
        else if (k % 4 == 2) e = cd(hi + 0.05 + 1.45 * k / 100.0, 0.0);
        else e = cd(lo + (hi - lo) * k / 100.0, 0.4 + 0.01 * k);
        MQuadratic q = m_quadratic(j0, e);
        cd delta = d.poly(e);
        worst = std::max(worst, std::abs(q.B * q.B - 4.0 * q.A * q.C - (delta * delta - 4.0)));
        cd m = periodic_m(j0, e);
        worst = std::max(worst, std::abs(q.A * m * m + q.B * m + q.C));
        if (e.imag() > 0.0 && !(m.imag() > 0.0)) herglotz = false;
      }
    }
    return std::pair{worst <= 1e-10 && herglotz, "residual=" + fmt(worst)};
  });

  // 5. quadratic sum rule on the rank-one fixtures
  run(5, "quadratic sum rule: t=0.5 (rhs 1/16) and t=1.5 (rhs 0.5625)", [] {
    SumRuleReport a = p2_sides(BlockJacobi::scalar({}, {0.5}));
    SumRuleReport b = p2_sides(BlockJacobi::scalar({}, {1.5}));
    bool ok = std::abs(a.rhs - 0.0625) < 1e-15 && a.residual <= 1e-6 &&
              std::abs(b.rhs - 0.5625) < 1e-15 && b.residual <= 1e-6 &&
              b.eigenvalue_sum > 0.0;
    return std::pair{ok, "res(0.5)=" + fmt(a.residual) + " res(1.5)=" + fmt(b.residual)};
  });

  // 6. zeroth sum rule identity on the fixture library
  run(6, "zeroth sum rule: Z - A0 - E0 <= 1e-6 on 12 fixtures (incl. a1=2)", [] {
    double worst = 0.0;
    bool a0_seen = false;
    for (const auto& j : fixture_library()) {
      C0Terms t = c0_terms(j);
      worst = std::max(worst, std::abs(t.residual));
      if (std::abs(t.A0 + std::log(2.0)) < 1e-12) a0_seen = true;
    }
    return std::pair{worst <= 1e-6 && a0_seen, "worst=" + fmt(worst)};
  });

  // 7. step-by-step rules and the nonlocal identity
  run(7, "step-by-step and nonlocal identities <= 1e-5 across the library", [] {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> rad(0.1, 0.7), ang(0.0, 2.0 * M_PI);
    double worst = 0.0;
    for (const auto& j : fixture_library()) {
      StepRuleResiduals r = step_sum_rules(j);
      worst = std::max({worst, r.c0, r.c1, r.p2});
      std::vector<cd> zs;
      for (int k = 0; k < 10; ++k) zs.push_back(std::polar(rad(rng), ang(rng)));
      NonlocalCheck nc = nonlocal_check(j, zs);
      worst = std::max(worst, nc.max_residual);
    }
    return std::pair{worst <= 1e-5, "worst=" + fmt(worst)};
  });

  // 8. determinant identity for the transported weight
  run(8, "det W identity, 20 interior energies for p=1,2,3, rel err <= 1e-6", [] {
    std::vector<PeriodicJacobi> ops = {PeriodicJacobi({1.1}, {0.2}),
                                       PeriodicJacobi({1.0, 2.0}, {0.0, 0.0}),
                                       PeriodicJacobi({1.0, 1.5, 0.8}, {0.2, -0.3, 0.4})};
    double worst = 0.0;
    for (const auto& j0 : ops) {
      auto omega = [&](double x) { return m_weight(j0, x); };
      int used = 0;
      for (int k = 1; used < 20 && k < 200; ++k) {
        double e = -2.0 + 4.0 * k / 200.0;
        if (std::abs(e) > 1.95) continue;
        DetWCheck c;
        try {
          c = detw_check(j0, omega, e);
        } catch (const EvalDomainError&) {
          continue;
        }
        // spec guarantees accuracy where preimages are well separated
        bool separated = true;
        for (std::size_t i = 0; i + 1 < c.preimages.size(); ++i)
          if (c.preimages[i + 1] - c.preimages[i] < 1e-3) separated = false;
        if (!separated) continue;
        ++used;
        worst = std::max(worst, std::abs(c.lhs - c.rhs) / std::max(std::abs(c.rhs), 1e-300));
      }
      if (used < 20) return std::pair{false, std::string("not enough interior energies")};
    }
    return std::pair{worst <= 1e-6, "rel=" + fmt(worst)};
  });

  // 9. six-way square-summability trend across the 1/4 threshold
  run(9, "square-summability trend: beta=0.3 settles, beta=0.2 exceeds 10x", [] {
    const int blocks = 100000;
    auto family = [&](double beta) {
      JacobiSeq seq;
      seq.offset = 1;
      long len = 2L * (blocks + 2) + 60;
      for (long n = 1; n <= len; ++n) {
        seq.a.push_back(1.0 + ((n % 2 == 0) ? 1.0 : -1.0) * std::pow(n + 1.0, -beta));
        seq.b.push_back(0.0);
      }
      return seq;
    };
    PeriodicJacobi free2({1.0, 1.0}, {0.0, 0.0});
    SquareSummabilityReport r3 = square_summability_report(family(0.3), free2, blocks);
    SquareSummabilityReport r2 = square_summability_report(family(0.2), free2, blocks);
    auto last_inc = [](const std::vector<double>& s) {
      return s.back() - s[s.size() - 2];
    };
    double worst_inc = 0.0, worst_ratio = 1e300;
    for (auto pick : {&SquareSummabilityReport::hs, &SquareSummabilityReport::block_l2,
                      &SquareSummabilityReport::abs_block_l2, &SquareSummabilityReport::g_block,
                      &SquareSummabilityReport::dist_sq, &SquareSummabilityReport::tilde_dist_sq}) {
      worst_inc = std::max(worst_inc, last_inc(r3.*pick));
      worst_ratio = std::min(worst_ratio, (r2.*pick).back() / (r3.*pick).back());
    }
    return std::pair{worst_inc < 1e-3 && worst_ratio > 10.0,
                     "inc=" + fmt(worst_inc) + " ratio=" + fmt(worst_ratio)};
  });

  // 10. closed forms of the period-2 free residual entries
  run(10, "period-2 free residual closed forms to 1e-12 on random sequences", [] {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> ua(0.6, 1.5), ub(-0.8, 0.8);
    PeriodicJacobi free2({1.0, 1.0}, {0.0, 0.0});
    Discriminant d = discriminant_oprl(free2);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      JacobiSeq seq;
      seq.two_sided = true;
      seq.offset = -12;
      for (int k = 0; k < 25; ++k) {
        seq.a.push_back(ua(rng));
        seq.b.push_back(ub(rng));
      }
      BandedWindow w = apply_poly(seq, d);
      w.subtract_shift_pair(2);
      for (long n = w.exact_lo(); n <= w.exact_hi(); ++n) {
        double diag = seq.a_at(n - 1) * seq.a_at(n - 1) + seq.b_at(n) * seq.b_at(n) +
                      seq.a_at(n) * seq.a_at(n) - 2.0;
        worst = std::max(worst, std::abs(w.entry(n, n) - cd(diag)));
        if (n + 1 <= w.exact_hi()) {
          double sub = seq.a_at(n) * (seq.b_at(n) + seq.b_at(n + 1));
          worst = std::max(worst, std::abs(w.entry(n, n + 1) - cd(sub)));
        }
        if (n + 2 <= w.exact_hi()) {
          double outer = seq.a_at(n) * seq.a_at(n + 1) - 1.0;
          worst = std::max(worst, std::abs(w.entry(n, n + 2) - cd(outer)));
        }
      }
    }
    return std::pair{worst <= 1e-12, "worst=" + fmt(worst)};
  });

  // 11. eigenvalue comparison bounds
  run(11, "sandwich >= -1e-10, eigenvalue ordering, half-moment bound (50 fixtures)", [] {
    std::mt19937 rng(31);
    double worst_margin = 0.0;
    bool ordered = true, ht_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      int l = 1 + static_cast<int>(rng() % 3);
      int blocks = 2 + static_cast<int>(rng() % 9);
      BlockJacobi j = testutil::random_nevai_fixture(rng, l, blocks);
      SandwichMargins m = sandwich_check(j, 80);
      worst_margin = std::min({worst_margin, m.upper, m.lower});
      if (!eigen_order_check(j, 80).ordered) ordered = false;
      HtBound h = ht_bound(j);
      if (!(h.lhs <= h.rhs + 1e-9)) ht_ok = false;
    }
    return std::pair{worst_margin >= -1e-10 && ordered && ht_ok,
                     "margin=" + fmt(worst_margin)};
  });

  // 12. isospectral flow conservation
  run(12, "flow conservation over t in [0,10], dt=1e-3, p<=4; residual <= 1e-7", [] {
    std::mt19937 rng(37);
    double worst_drift = 0.0, worst_res = 0.0;
    for (int p : {2, 3, 4}) {
      PeriodicJacobi j0 = testutil::random_periodic_jacobi(rng, p);
      Discriminant d0 = discriminant_oprl(j0);
      std::vector<double> times;
      for (int k = 1; k <= 10; ++k) times.push_back(k);
      TorusSample s = toda_sample(j0, times, 1e-3, 1e-8);
      for (const auto& pt : s.points) {
        Discriminant d = discriminant_oprl(pt);
        for (int c = 0; c <= p; ++c)
          worst_drift = std::max(worst_drift, std::abs(d.poly.coeff(c) - d0.poly.coeff(c)));
        JacobiSeq seq = JacobiSeq::from_periodic(pt, 1, 8 * p + 6, false);
        worst_res = std::max(worst_res, magic_residual(seq, j0).sup);
      }
    }
    return std::pair{worst_drift <= 1e-8 && worst_res <= 1e-7,
                     "drift=" + fmt(worst_drift) + " res=" + fmt(worst_res)};
  });

  // 13. metric inequalities
  run(13, "window/weighted metric inequalities for q = 1, 2, inf (100 pairs)", [] {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> ua(0.6, 1.5), ub(-0.8, 0.8);
    std::uniform_real_distribution<double> mod(0.0, 0.8), ang(0.0, 2 * M_PI);
    auto norm = [](const std::vector<double>& v, int q) {
      if (q == 0) {
        double s = 0.0;
        for (double u : v) s = std::max(s, u);
        return s;
      }
      double s = 0.0;
      for (double u : v) s += std::pow(u, q);
      return std::pow(s, 1.0 / q);
    };
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      int p = 2 + static_cast<int>(rng() % 4);
      JacobiSeq x, y;
      x.offset = y.offset = 1;
      VerblunskySeq vx, vy;
      for (int k = 0; k < 80; ++k) {
        x.a.push_back(ua(rng));
        x.b.push_back(ub(rng));
        y.a.push_back(ua(rng));
        y.b.push_back(ub(rng));
        vx.alpha.push_back(std::polar(mod(rng), ang(rng)));
        vy.alpha.push_back(std::polar(mod(rng), ang(rng)));
      }
      std::vector<double> dv, tv, dvu, tvu;
      for (long m = 1; m <= 30; ++m) {
        dv.push_back(d_m(x, y, m));
        tv.push_back(tilde_d_m(x, y, m, p));
      }
      for (long m = 0; m <= 29; ++m) {
        dvu.push_back(d_m(vx, vy, m));
        tvu.push_back(tilde_d_m(vx, vy, m, p));
      }
      for (int q : {1, 2, 0}) {
        if (std::exp(1.0 - p) * norm(tv, q) > norm(dv, q) * (1.0 + 1e-12)) ok = false;
        if (std::exp(-double(p)) * norm(tvu, q) > norm(dvu, q) * (1.0 + 1e-12)) ok = false;
      }
    }
    return std::pair{ok, std::string()};
  });

  // 14. zero-counting measure moments of an eventually periodic operator
  run(14, "zero-measure moments (n=200) within 0.05 of the equilibrium moments", [] {
    PeriodicJacobi j0({2.0, 1.0}, {0.0, 0.0});
    JacobiSeq seq = JacobiSeq::from_periodic(j0, 1, 210, false);
    // perturbed head
    seq.a[0] *= 1.10;
    seq.a[1] *= 0.95;
    seq.b[0] += 0.30;
    seq.b[1] -= 0.20;
    seq.b[2] += 0.10;
    PointMeasure zm = zero_measure(seq, 200);
    double worst = 0.0;
    for (int k = 1; k <= 3; ++k)
      worst = std::max(worst, std::abs(zm.moment(k) - harmonic_moment(j0, k)));
    return std::pair{worst <= 0.05, "worst=" + fmt(worst)};
  });

  if (g_failures == 0) std::printf("all criteria passed\n");
  else std::printf("%d criteria failed\n", g_failures);
  return g_failures;
}
