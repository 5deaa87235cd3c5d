// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_CMV_HPP
#define PERISPEC_CMV_HPP

#include <complex>
#include <vector>

#include "perispec/linalg.hpp"
#include "perispec/poly.hpp"

namespace perispec {

/// A window of Verblunsky coefficients |alpha_n| < 1.  One-sided sequences
/// start at n = 0; two-sided windows cover [offset, offset + size - 1].
struct VerblunskySeq {
  long offset = 0;
  std::vector<std::complex<double>> alpha;
  bool two_sided = false;

  long lo() const { return offset; }
  long hi() const { return offset + static_cast<long>(alpha.size()) - 1; }
  std::complex<double> alpha_at(long n) const;
  double rho_at(long n) const;

  void validate() const;
};

/// One period of a p-periodic Verblunsky sequence; p must be even.
struct PeriodicVerblunsky {
  std::vector<std::complex<double>> alpha;

  PeriodicVerblunsky() = default;
  explicit PeriodicVerblunsky(std::vector<std::complex<double>> alpha_in);

  int period() const { return static_cast<int>(alpha.size()); }
  std::complex<double> alpha_at(long n) const;  // periodic extension
  double rho_at(long n) const;
  PeriodicVerblunsky shifted(int k) const;

  /// Window [lo, hi] of the periodic extension.
  VerblunskySeq window(long lo, long hi, bool two_sided) const;

  void validate() const;
};

/// Interleave zeros: period p -> period 2p (handles odd OPUC periods).
PeriodicVerblunsky sieved(const std::vector<std::complex<double>>& alpha);

/// 2x2 block [[conj(alpha), rho], [rho, -alpha]]; unitary and symmetric.
Matrix theta_block(std::complex<double> alpha);

/// Entries of the CMV matrix C = L M on rows/columns [lo, hi].  Two-sided
/// alignment: L_{00} = conj(alpha_0), M_{00} = -alpha_{-1}; one-sided uses
/// M_{00} = 1.  Row/column i of the returned matrix is index lo + i.
Matrix cmv_window(const VerblunskySeq& v, long lo, long hi);

/// Same window for C^{-1} = M^dagger L^dagger.
Matrix cmv_inverse_window(const VerblunskySeq& v, long lo, long hi);

enum class CmvEntry {
  outer_even,      // (C^l)_{2m, 2m+2l}     = rho_{2m} ... rho_{2m+2l-1}
  outer_odd_zero,  // (C^l)_{2m+1, 2m+2l+1} = 0
  inv_outer_even_zero,  // (C^-l)_{2m, 2m+2l} = 0
  inv_outer_odd,   // (C^-l)_{2m+1, 2m+2l+1} = rho_{2m+1} ... rho_{2m+2l}
  sub_even,        // (C^l)_{2m, 2m+2l-1}   = rho_{2m} ... rho_{2m+2l-2} conj(alpha_{2m+2l-1})
  sub_odd,         // (C^l)_{2m+1, 2m+2l}   = -alpha_{2m} rho_{2m+1} ... rho_{2m+2l-1}
  inv_sub_even,    // (C^-l)_{2m, 2m+2l-1}  = -conj(alpha_{2m-1}) rho_{2m} ... rho_{2m+2l-2}
  inv_sub_odd,     // (C^-l)_{2m+1, 2m+2l}  = rho_{2m+1} ... rho_{2m+2l-1} alpha_{2m+2l}
};

/// Closed-form extreme-diagonal entries of CMV matrix powers.
std::complex<double> cmv_power_entry(const VerblunskySeq& v, int l, long m, CmvEntry which);

/// Laurent discriminant Delta(z) = tr(z^{-p/2} M_{p-1}(z) ... M_0(z)) with
/// M_n(z) = rho_n^{-1} [[z, -conj(alpha_n)], [-alpha_n z, 1]]; real on the
/// unit circle, top coefficient (rho_0...rho_{p-1})^{-1}.
LaurentPoly discriminant_opuc(const PeriodicVerblunsky& v);

/// Residual of the two equivalent forms of the relation that moves a theta
/// block across the transfer matrix:
///   (z y, y')^T = Theta(alpha) (x, x')^T  iff  (x', y')^T = M(z) (y, x)^T.
/// Returns the max residual of both directions at the given sample.
double theta_transfer_check(std::complex<double> alpha, std::complex<double> x,
                            std::complex<double> xp, std::complex<double> y,
                            std::complex<double> z);

}  // namespace perispec

#endif
