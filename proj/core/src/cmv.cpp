// SPDX-License-Identifier: Apache-2.0

#include "perispec/cmv.hpp"

#include <algorithm>
#include <cmath>

#include "perispec/errors.hpp"

namespace perispec {

namespace {
long floor_mod(long n, long p) {
  long r = n % p;
  return r < 0 ? r + p : r;
}

double rho_of(std::complex<double> alpha) {
  double r2 = 1.0 - std::norm(alpha);
  if (!(r2 > 0.0)) throw InputError("Verblunsky coefficient must satisfy |alpha| < 1");
  return std::sqrt(r2);
}
}  // namespace

void VerblunskySeq::validate() const {
  if (!two_sided && offset != 0) throw InputError("VerblunskySeq: one-sided sequences start at 0");
  for (const auto& v : alpha) (void)rho_of(v);
}

std::complex<double> VerblunskySeq::alpha_at(long n) const {
  if (n < lo() || n > hi()) throw InputError("VerblunskySeq: window touches undefined coefficient");
  return alpha[static_cast<std::size_t>(n - offset)];
}

double VerblunskySeq::rho_at(long n) const { return rho_of(alpha_at(n)); }

PeriodicVerblunsky::PeriodicVerblunsky(std::vector<std::complex<double>> alpha_in)
    : alpha(std::move(alpha_in)) {
  validate();
}

void PeriodicVerblunsky::validate() const {
  if (alpha.empty() || alpha.size() % 2 != 0)
    throw InputError("PeriodicVerblunsky: period must be even (use sieving for odd periods)");
  for (const auto& v : alpha) (void)rho_of(v);
}

std::complex<double> PeriodicVerblunsky::alpha_at(long n) const {
  return alpha[floor_mod(n, period())];
}

double PeriodicVerblunsky::rho_at(long n) const { return rho_of(alpha_at(n)); }

PeriodicVerblunsky PeriodicVerblunsky::shifted(int k) const {
  // Torus shifts preserve the even alignment, so shift by whole 2-blocks.
  const int p = period();
  std::vector<std::complex<double>> s(p);
  for (int j = 0; j < p; ++j) s[j] = alpha[floor_mod(j + k, p)];
  PeriodicVerblunsky r;
  r.alpha = std::move(s);
  return r;
}

VerblunskySeq PeriodicVerblunsky::window(long lo, long hi, bool two_sided) const {
  VerblunskySeq s;
  s.offset = lo;
  s.two_sided = two_sided;
  for (long n = lo; n <= hi; ++n) s.alpha.push_back(alpha_at(n));
  return s;
}

PeriodicVerblunsky sieved(const std::vector<std::complex<double>>& alpha) {
  std::vector<std::complex<double>> s;
  s.reserve(2 * alpha.size());
  for (const auto& v : alpha) {
    s.push_back(0.0);
    s.push_back(v);
  }
  return PeriodicVerblunsky(std::move(s));
}

Matrix theta_block(std::complex<double> alpha) {
  double rho = rho_of(alpha);
  Matrix t(2, 2);
  t(0, 0) = std::conj(alpha);
  t(0, 1) = rho;
  t(1, 0) = rho;
  t(1, 1) = -alpha;
  return t;
}

namespace {

// Entries of the L / M factors at (i, j); `conjugated` selects the adjoint.
struct FactorEntry {
  const VerblunskySeq& v;
  bool is_m;        // M factor (odd-aligned blocks) vs L (even-aligned)
  bool conjugated;  // adjoint of the factor

  std::complex<double> operator()(long i, long j) const {
    if (conjugated) {
      FactorEntry plain{v, is_m, false};
      return std::conj(plain(j, i));
    }
    if (std::abs(i - j) > 1) return 0.0;
    // One-sided M has a 1x1 identity block at (0,0).
    if (is_m && !v.two_sided && (i == 0 || j == 0)) return (i == 0 && j == 0) ? 1.0 : 0.0;
    // Block Theta(alpha_n) occupies rows/cols (n, n+1); L blocks have n even,
    // M blocks n odd.
    long n = is_m ? ((i % 2 != 0) ? i : i - 1) : ((i % 2 == 0) ? i : i - 1);
    if (j < n || j > n + 1) return 0.0;
    std::complex<double> alpha = v.alpha_at(n);
    double rho = rho_of(alpha);
    int bi = static_cast<int>(i - n), bj = static_cast<int>(j - n);
    if (bi == 0 && bj == 0) return std::conj(alpha);
    if (bi == 0 && bj == 1) return rho;
    if (bi == 1 && bj == 0) return rho;
    return -alpha;
  }
};

Matrix product_window(const VerblunskySeq& v, long lo, long hi, bool inverse) {
  if (hi < lo) throw InputError("cmv_window: empty range");
  long elo = lo - 2, ehi = hi + 2;
  if (!v.two_sided) elo = std::max(elo, 0L);
  const int n = static_cast<int>(ehi - elo + 1);
  Matrix first(n, n), second(n, n);
  // C = L M, C^{-1} = M^dagger L^dagger.
  FactorEntry f1{v, inverse, inverse};   // inverse: M^dagger, else L
  FactorEntry f2{v, !inverse, inverse};  // inverse: L^dagger, else M
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
      first(i, j) = f1(elo + i, elo + j);
      second(i, j) = f2(elo + i, elo + j);
    }
  Matrix prod = first * second;
  const int off = static_cast<int>(lo - elo);
  const int m = static_cast<int>(hi - lo + 1);
  Matrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = prod(off + i, off + j);
  return out;
}

}  // namespace

Matrix cmv_window(const VerblunskySeq& v, long lo, long hi) {
  return product_window(v, lo, hi, false);
}

Matrix cmv_inverse_window(const VerblunskySeq& v, long lo, long hi) {
  return product_window(v, lo, hi, true);
}

std::complex<double> cmv_power_entry(const VerblunskySeq& v, int l, long m, CmvEntry which) {
  if (l < 1) throw InputError("cmv_power_entry: l must be >= 1");
  auto rho_prod = [&](long from, long to) {
    std::complex<double> r = 1.0;
    for (long j = from; j <= to; ++j) r *= v.rho_at(j);
    return r;
  };
  switch (which) {
    case CmvEntry::outer_even:
      return rho_prod(2 * m, 2 * m + 2 * l - 1);
    case CmvEntry::outer_odd_zero:
    case CmvEntry::inv_outer_even_zero:
      return 0.0;
    case CmvEntry::inv_outer_odd:
      return rho_prod(2 * m + 1, 2 * m + 2 * l);
    case CmvEntry::sub_even:
      return rho_prod(2 * m, 2 * m + 2 * l - 2) * std::conj(v.alpha_at(2 * m + 2 * l - 1));
    case CmvEntry::sub_odd:
      return -v.alpha_at(2 * m) * rho_prod(2 * m + 1, 2 * m + 2 * l - 1);
    case CmvEntry::inv_sub_even:
      return -std::conj(v.alpha_at(2 * m - 1)) * rho_prod(2 * m, 2 * m + 2 * l - 2);
    case CmvEntry::inv_sub_odd:
      return rho_prod(2 * m + 1, 2 * m + 2 * l - 1) * v.alpha_at(2 * m + 2 * l);
  }
  throw InputError("cmv_power_entry: unknown selector");
}

LaurentPoly discriminant_opuc(const PeriodicVerblunsky& v) {
  v.validate();
  const int p = v.period();
  // 2x2 product of M_n(z) = rho_n^{-1} [[z, -conj(a_n)], [-a_n z, 1]],
  // n = 0..p-1, highest factor leftmost.
  LaurentPoly t11 = LaurentPoly::monomial(0, 1.0), t12, t21, t22 = t11;
  bool first = true;
  for (int n = 0; n < p; ++n) {
    std::complex<double> a = v.alpha_at(n);
    double rho = v.rho_at(n);
    std::complex<double> inv = 1.0 / rho;
    LaurentPoly m11 = LaurentPoly::monomial(1, inv);
    LaurentPoly m12 = LaurentPoly::monomial(0, -std::conj(a) * inv);
    LaurentPoly m21 = LaurentPoly::monomial(1, -a * inv);
    LaurentPoly m22 = LaurentPoly::monomial(0, inv);
    if (first) {
      t11 = m11;
      t12 = m12;
      t21 = m21;
      t22 = m22;
      first = false;
      continue;
    }
    // prepend: T <- M_n ... with product order M_{p-1} ... M_0, build left
    LaurentPoly n11 = m11 * t11 + m12 * t21;
    LaurentPoly n12 = m11 * t12 + m12 * t22;
    LaurentPoly n21 = m21 * t11 + m22 * t21;
    LaurentPoly n22 = m21 * t12 + m22 * t22;
    t11 = n11;
    t12 = n12;
    t21 = n21;
    t22 = n22;
  }
  LaurentPoly tr = (t11 + t22) * LaurentPoly::monomial(-p / 2, 1.0);
  return tr;
}

double theta_transfer_check(std::complex<double> alpha, std::complex<double> x,
                            std::complex<double> xp, std::complex<double> y,
                            std::complex<double> z) {
  if (z == std::complex<double>(0.0)) throw InputError("theta_transfer_check: z must be nonzero");
  double rho = rho_of(alpha);
  auto theta = [&](std::complex<double> u, std::complex<double> v) {
    return std::pair{std::conj(alpha) * u + rho * v, rho * u - alpha * v};
  };
  auto mstep = [&](std::complex<double> u, std::complex<double> v) {
    return std::pair{(z * u - std::conj(alpha) * v) / rho, (-alpha * z * u + v) / rho};
  };

  // Theta relation first, transfer form second.
  auto [w1, w2] = theta(x, xp);
  std::complex<double> ya = w1 / z;
  auto [v1, v2] = mstep(ya, x);
  double res_a = std::abs(v1 - xp) + std::abs(v2 - w2);

  // Transfer form first, Theta relation second.
  auto [u1, u2] = mstep(y, x);
  auto [t1, t2] = theta(x, u1);
  double res_b = std::abs(t1 - z * y) + std::abs(t2 - u2);

  return std::max(res_a, res_b);
}

}  // namespace perispec
