// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_MOBIUS_HPP
#define PERISPEC_MOBIUS_HPP

#include <complex>

namespace perispec {

/// 2x2 complex matrix acting on the Riemann sphere by
/// m -> (t11*m + t12) / (t21*m + t22).  Composition is matrix product.
struct Mobius2 {
  std::complex<double> t11{1.0}, t12{0.0}, t21{0.0}, t22{1.0};

  static Mobius2 identity() { return {}; }

  std::complex<double> det() const { return t11 * t22 - t12 * t21; }
  std::complex<double> trace() const { return t11 + t22; }

  std::complex<double> apply(std::complex<double> m) const {
    return (t11 * m + t12) / (t21 * m + t22);
  }

  /// this * o, i.e. the map m -> this(o(m)).
  Mobius2 compose(const Mobius2& o) const {
    return {t11 * o.t11 + t12 * o.t21, t11 * o.t12 + t12 * o.t22,
            t21 * o.t11 + t22 * o.t21, t21 * o.t12 + t22 * o.t22};
  }
};

}  // namespace perispec

#endif
