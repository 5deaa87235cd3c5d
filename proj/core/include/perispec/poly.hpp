// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_POLY_HPP
#define PERISPEC_POLY_HPP

#include <complex>
#include <map>
#include <vector>

namespace perispec {

/// Real polynomial, coefficients degree-0 first, trailing zeros trimmed.
class RealPoly {
 public:
  RealPoly() = default;
  explicit RealPoly(std::vector<double> coeffs);
  static RealPoly constant(double c) { return RealPoly({c}); }
  static RealPoly x() { return RealPoly({0.0, 1.0}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : 0.0; }

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> z) const;

  RealPoly derivative() const;
  RealPoly operator+(const RealPoly& o) const;
  RealPoly operator-(const RealPoly& o) const;
  RealPoly operator*(const RealPoly& o) const;
  RealPoly operator*(double s) const;
  RealPoly operator-(double s) const { return *this - constant(s); }
  RealPoly operator+(double s) const { return *this + constant(s); }

  /// Max |coefficient|; 0 for the zero polynomial.
  double scale() const;

 private:
  std::vector<double> c_;
};

/// Laurent polynomial with complex coefficients on exponents [-d, d].
class LaurentPoly {
 public:
  LaurentPoly() = default;
  explicit LaurentPoly(std::map<int, std::complex<double>> coeffs);

  static LaurentPoly monomial(int k, std::complex<double> c);

  int min_exp() const;
  int max_exp() const;
  std::complex<double> coeff(int k) const;
  const std::map<int, std::complex<double>>& coeffs() const { return c_; }

  /// z must be nonzero; raises EvalDomainError otherwise.
  std::complex<double> operator()(std::complex<double> z) const;

  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly operator*(std::complex<double> s) const;

  /// True iff c_{-k} = conj(c_k) for all k, i.e. real values on |z| = 1.
  bool real_on_circle(double tol = 1e-12) const;

  double scale() const;

 private:
  void trim();
  std::map<int, std::complex<double>> c_;
};

struct RootWithMultiplicity {
  double x;
  int multiplicity;
};

/// All real roots of p in [lo, hi] to absolute accuracy tol, ascending, with
/// multiplicities.  Roots are isolated by recursing on real critical points
/// (between consecutive real roots of p' the polynomial is monotone), then
/// polished by Newton with a bisection fallback.  A critical point where
/// |p| <= 10*tol*scale counts as an even-order root.
std::vector<RootWithMultiplicity> real_roots(const RealPoly& p, double lo, double hi,
                                             double tol = 1e-12);

}  // namespace perispec

#endif
