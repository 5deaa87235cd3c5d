// SPDX-License-Identifier: Apache-2.0

#include "perispec/poly.hpp"

#include <algorithm>
#include <cmath>

#include "perispec/errors.hpp"

namespace perispec {

namespace {
constexpr double kTrim = 0.0;  // exact-zero trim only; callers own their roundoff
}

RealPoly::RealPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && std::abs(c_.back()) <= kTrim) c_.pop_back();
}

double RealPoly::operator()(double x) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

std::complex<double> RealPoly::operator()(std::complex<double> z) const {
  std::complex<double> r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * z + *it;
  return r;
}

RealPoly RealPoly::derivative() const {
  if (c_.size() <= 1) return RealPoly();
  std::vector<double> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return RealPoly(std::move(d));
}

RealPoly RealPoly::operator+(const RealPoly& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
  for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
  return RealPoly(std::move(r));
}

RealPoly RealPoly::operator-(const RealPoly& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
  for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] -= o.c_[k];
  return RealPoly(std::move(r));
}

RealPoly RealPoly::operator*(const RealPoly& o) const {
  if (is_zero() || o.is_zero()) return RealPoly();
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return RealPoly(std::move(r));
}

RealPoly RealPoly::operator*(double s) const {
  std::vector<double> r = c_;
  for (auto& v : r) v *= s;
  return RealPoly(std::move(r));
}

double RealPoly::scale() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

LaurentPoly::LaurentPoly(std::map<int, std::complex<double>> coeffs) : c_(std::move(coeffs)) {
  trim();
}

void LaurentPoly::trim() {
  for (auto it = c_.begin(); it != c_.end();) {
    if (it->second == std::complex<double>(0.0)) it = c_.erase(it);
    else ++it;
  }
}

LaurentPoly LaurentPoly::monomial(int k, std::complex<double> c) {
  LaurentPoly p;
  if (c != std::complex<double>(0.0)) p.c_[k] = c;
  return p;
}

int LaurentPoly::min_exp() const { return c_.empty() ? 0 : c_.begin()->first; }
int LaurentPoly::max_exp() const { return c_.empty() ? 0 : c_.rbegin()->first; }

std::complex<double> LaurentPoly::coeff(int k) const {
  auto it = c_.find(k);
  return it == c_.end() ? std::complex<double>(0.0) : it->second;
}

std::complex<double> LaurentPoly::operator()(std::complex<double> z) const {
  if (min_exp() < 0 && z == std::complex<double>(0.0))
    throw EvalDomainError("LaurentPoly: evaluation at z = 0");
  // Horner on the polynomial part and on the principal part in 1/z.
  std::complex<double> pos = 0.0, neg = 0.0;
  for (int k = max_exp(); k >= 1; --k) pos = pos * z + coeff(k);
  pos *= z;
  if (min_exp() < 0) {
    std::complex<double> w = 1.0 / z;
    for (int k = min_exp(); k <= -1; ++k) neg = neg * w + coeff(k);
    neg *= w;
  }
  return pos + neg + coeff(0);
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  auto r = c_;
  for (const auto& [k, v] : o.c_) r[k] += v;
  return LaurentPoly(std::move(r));
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  auto r = c_;
  for (const auto& [k, v] : o.c_) r[k] -= v;
  return LaurentPoly(std::move(r));
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  std::map<int, std::complex<double>> r;
  for (const auto& [i, u] : c_)
    for (const auto& [j, v] : o.c_) r[i + j] += u * v;
  return LaurentPoly(std::move(r));
}

LaurentPoly LaurentPoly::operator*(std::complex<double> s) const {
  auto r = c_;
  for (auto& [k, v] : r) v *= s;
  return LaurentPoly(std::move(r));
}

bool LaurentPoly::real_on_circle(double tol) const {
  double s = std::max(scale(), 1e-300);
  for (const auto& [k, v] : c_)
    if (std::abs(v - std::conj(coeff(-k))) > tol * s) return false;
  return true;
}

double LaurentPoly::scale() const {
  double m = 0.0;
  for (const auto& [k, v] : c_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Newton polish inside a bracket [a, b] where p is monotone; falls back to
// bisection whenever a Newton step leaves the bracket or stalls.
double polish_root(const RealPoly& p, const RealPoly& dp, double a, double b, double tol) {
  double fa = p(a), fb = p(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    double f = p(x);
    if (f == 0.0) return x;
    if ((f > 0) == (fa > 0)) a = x; else b = x;
    double d = dp(x);
    double step = (d != 0.0) ? f / d : 0.0;
    double xn = x - step;
    if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
    if (std::abs(xn - x) <= tol * 0.5) return xn;
    x = xn;
  }
  return x;  // bisection has contracted the bracket; accept midpoint
}

int multiplicity_at(const RealPoly& p, double r, double tol) {
  double s = std::max(p.scale(), 1e-300);
  RealPoly d = p;
  int m = 0;
  double fac = 1.0;
  while (!d.is_zero()) {
    if (std::abs(d(r)) > 10.0 * tol * s * fac) break;
    ++m;
    fac *= 10.0;
    d = d.derivative();
  }
  return std::max(m, 1);
}

void real_roots_impl(const RealPoly& p, double lo, double hi, double tol,
                     std::vector<double>& out) {
  const int deg = p.degree();
  if (deg <= 0) return;
  if (deg == 1) {
    double r = -p.coeff(0) / p.coeff(1);
    if (r >= lo && r <= hi) out.push_back(r);
    return;
  }
  RealPoly dp = p.derivative();
  std::vector<double> crit;
  real_roots_impl(dp, lo, hi, tol, crit);

  std::vector<double> nodes;
  nodes.push_back(lo);
  for (double c : crit)
    if (c > lo + tol && c < hi - tol) nodes.push_back(c);
  nodes.push_back(hi);

  const double s = std::max(p.scale(), 1e-300);
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double a = nodes[i], b = nodes[i + 1];
    double fa = p(a), fb = p(b);
    if (fa == 0.0 && i == 0) out.push_back(a);
    if (fa * fb < 0.0) {
      out.push_back(polish_root(p, dp, a, b, tol));
    } else if (fb == 0.0) {
      out.push_back(b);
    } else if (i + 2 < nodes.size() || i > 0) {
      // interior critical point at b: an even-order root touches zero there
      if (i + 2 < nodes.size() && std::abs(p(b)) <= 10.0 * tol * s) out.push_back(b);
    }
  }
}

}  // namespace

std::vector<RootWithMultiplicity> real_roots(const RealPoly& p, double lo, double hi, double tol) {
  if (p.is_zero()) throw InputError("real_roots: zero polynomial");
  if (!(lo < hi)) throw InputError("real_roots: empty interval");
  if (p.degree() == 0) return {};
  if (!(tol > 0)) throw InputError("real_roots: tol must be positive");

  std::vector<double> raw;
  real_roots_impl(p, lo, hi, tol, raw);
  std::sort(raw.begin(), raw.end());

  std::vector<RootWithMultiplicity> out;
  for (double r : raw) {
    if (!out.empty() && std::abs(r - out.back().x) <= 10.0 * tol) continue;  // duplicate
    out.push_back({r, multiplicity_at(p, r, tol)});
  }
  return out;
}

}  // namespace perispec
