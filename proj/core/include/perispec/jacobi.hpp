// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_JACOBI_HPP
#define PERISPEC_JACOBI_HPP

#include <complex>
#include <vector>

#include "perispec/mobius.hpp"
#include "perispec/linalg.hpp"
#include "perispec/poly.hpp"

namespace perispec {

/// One period of a p-periodic Jacobi operator: a_j > 0, b_j real, j = 1..p.
struct PeriodicJacobi {
  std::vector<double> a;
  std::vector<double> b;

  PeriodicJacobi() = default;
  PeriodicJacobi(std::vector<double> a_in, std::vector<double> b_in);

  int period() const { return static_cast<int>(a.size()); }
  double a_at(long n) const;  // periodic extension, any integer index
  double b_at(long n) const;

  /// Cyclic shift by k sites: (a, b)_j -> (a, b)_{j+k}.
  PeriodicJacobi shifted(int k) const;

  void validate() const;  // raises InputError
};

/// A window of Jacobi coefficients.  One-sided windows start at index 1
/// (J_{11} = b_1, J_{n,n+1} = a_n); two-sided windows cover
/// [offset, offset + size - 1] of a bi-infinite sequence.
struct JacobiSeq {
  long offset = 1;
  std::vector<double> a;
  std::vector<double> b;
  bool two_sided = false;

  long lo() const { return offset; }
  long hi() const { return offset + static_cast<long>(b.size()) - 1; }
  double a_at(long n) const;  // bond (n, n+1)
  double b_at(long n) const;

  static JacobiSeq from_periodic(const PeriodicJacobi& j0, long lo, long hi, bool two_sided);
  void validate() const;
};

/// Discriminant of a periodic Jacobi operator: the trace of the one-period
/// transfer product, a degree-p real polynomial with leading coefficient
/// 1/(a_1...a_p).
struct Discriminant {
  RealPoly poly;
  int period = 0;
  double capacity = 0.0;  // (a_1...a_p)^{1/p}
};

struct BandSet {
  std::vector<std::pair<double, double>> bands;      // closed, ascending
  std::vector<double> closed_gaps;                   // touching points
  std::vector<std::pair<double, double>> open_gaps;  // open intervals between bands
};

/// One-step transfer matrix (1/a) [[x-b, -1], [a^2, 0]]; unimodular.
Mobius2 transfer_step(double a, double b, std::complex<double> x);

/// Exact polynomial discriminant via the transfer product.
Discriminant discriminant_oprl(const PeriodicJacobi& j0);

/// Band/gap structure from the roots of Delta -+ 2.  Exactly p bands; two
/// edges closer than edge_merge_tol*scale merge into a closed gap.
BandSet bands(const Discriminant& d, double tol = 1e-12);

double capacity(const PeriodicJacobi& j0);

/// Density of the equilibrium (harmonic) measure at x strictly inside a band:
/// (2/p) |Delta'(x)| / sqrt(4 - Delta(x)^2) / (2 pi).
double harmonic_density(const Discriminant& d, double x);

/// Mass of the harmonic measure on one band (should be 1/p).
double band_mass(const Discriminant& d, const std::pair<double, double>& band, double tol = 1e-9);

/// k-th moment of the harmonic measure, via Floquet fiber averaging.
double harmonic_moment(const PeriodicJacobi& j0, int k);

/// Lyapunov exponent (1/p) log|Delta/2 + sqrt(Delta^2/4 - 1)|, branch chosen
/// so that the value is >= 0; zero on the bands.
double lyapunov(const Discriminant& d, std::complex<double> z);

/// p x p Floquet fiber J(theta): periodic tridiagonal cycle with corner
/// entries a_p e^{-i theta} (row 1) and a_p e^{+i theta} (row p).
/// Its eigenvalues solve Delta(x) = 2 cos(theta).
Matrix floquet_fiber(const PeriodicJacobi& j0, double theta);

/// Quadratic A m^2 + B m + C = 0 satisfied by the half-line m-function,
/// with B^2 - 4AC = Delta^2 - 4 (coefficients from the unimodular one-period
/// Mobius stripping map).
struct MQuadratic {
  std::complex<double> A, B, C;
};
MQuadratic m_quadratic(const PeriodicJacobi& j0, std::complex<double> E);

/// Half-line m-function m(E) = <delta_1, (J0-E)^{-1} delta_1> of the periodic
/// operator; Herglotz branch (Im m * Im E > 0 off the real axis, m ~ -1/E at
/// real infinity, boundary value from above on the bands).
std::complex<double> periodic_m(const PeriodicJacobi& j0, std::complex<double> E);

/// Spectral weight Im m(x + i0)/pi at x inside the bands.
double m_weight(const PeriodicJacobi& j0, double x);

struct PointMeasure {
  std::vector<double> points;
  std::vector<double> weights;

  double moment(int k) const;
};

/// Zero-counting measure of the degree-n orthonormal polynomial: eigenvalues
/// of the top-left n x n truncation, weight 1/n each.
PointMeasure zero_measure(const JacobiSeq& seq, int n);

/// Orthonormal polynomials p_0..p_{n} of the half-line operator at x.
std::vector<double> orthonormal_polys(const JacobiSeq& seq, int n, double x);

}  // namespace perispec

#endif
