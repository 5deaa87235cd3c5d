// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_MAGIC_HPP
#define PERISPEC_MAGIC_HPP

#include <complex>
#include <map>
#include <vector>

#include "perispec/cmv.hpp"
#include "perispec/jacobi.hpp"
#include "perispec/linalg.hpp"
#include "perispec/poly.hpp"

namespace perispec {

/// Banded window of a (half- or bi-infinite) operator: rows [lo, hi],
/// bandwidth bw, with entry (i, j) stored for |i - j| <= bw.  Rows outside
/// [exact_lo(), exact_hi()] are contaminated by the window edges and are not
/// entries of the infinite operator.
class BandedWindow {
 public:
  BandedWindow() = default;
  BandedWindow(long lo, long hi, int bw, bool hard_lo, bool hard_hi);

  long lo() const { return lo_; }
  long hi() const { return hi_; }
  int bandwidth() const { return bw_; }
  int rows() const { return static_cast<int>(hi_ - lo_ + 1); }
  bool hard_lo() const { return hard_lo_; }
  bool hard_hi() const { return hard_hi_; }
  int margin_lo() const { return soil_lo_; }
  int margin_hi() const { return soil_hi_; }
  long exact_lo() const { return lo_ + soil_lo_; }
  long exact_hi() const { return hi_ - soil_hi_; }

  std::complex<double>& at(long i, long j);
  std::complex<double> entry(long i, long j) const;  // 0 outside the band

  BandedWindow multiply(const BandedWindow& o) const;
  void add_scaled_identity(std::complex<double> c);
  void scale(std::complex<double> c);
  void subtract_shift_pair(int p);  // subtract S^p + S^-p (ones at distance p)

  void set_margins(int lo_m, int hi_m);

 private:
  long lo_ = 0, hi_ = -1;
  int bw_ = 0;
  bool hard_lo_ = false, hard_hi_ = false;
  int soil_lo_ = 0, soil_hi_ = 0;
  std::vector<std::complex<double>> data_;  // rows * (2bw+1), diagonal-major
};

/// Window of J itself (bandwidth 1).
BandedWindow jacobi_window(const JacobiSeq& seq);

/// Window of the CMV matrix C (bandwidth 2) over the sequence range.
BandedWindow cmv_banded_window(const VerblunskySeq& seq);

/// Polynomial of the Jacobi operator on the window; margin p per soft side.
BandedWindow apply_poly(const JacobiSeq& seq, const Discriminant& d);

/// Laurent polynomial of the CMV operator on the window.
BandedWindow apply_poly(const VerblunskySeq& seq, const LaurentPoly& d);

struct ResidualReport {
  double sup = 0.0;                             // sup |entry| over the exact region
  std::vector<double> hs_partial;               // partial sums of squared entries, per block
  std::vector<double> block_norm_partial;       // partial sums of ||B_n|| + ||A_n - 1||
  std::map<int, std::vector<double>> diagonal;  // per-diagonal |entry| profiles
  long first_row = 0;                           // row index of the first profiled entry
};

/// Interior entries of Delta_{J0}(seq) - (S^p + S^-p) with norms split per
/// diagonal, so the extreme-diagonal mechanism is visible.
ResidualReport magic_residual(const JacobiSeq& seq, const PeriodicJacobi& j0);
ResidualReport magic_residual(const VerblunskySeq& seq, const PeriodicVerblunsky& v0);

struct BlockSeq {
  int l = 0;                  // block size (the period)
  std::vector<Matrix> A;      // A_n, n = 1..N
  std::vector<Matrix> B;      // B_n Hermitian
};

/// p x p block decomposition of a banded window with bandwidth <= 2p+1;
/// raises StructuralError if entries outside the block tridiagonal pattern
/// exceed tol * scale.  Uses only blocks fully inside the exact region; the
/// first block is anchored at start_row (default: first exact row for
/// two-sided, row 1 for one-sided).
BlockSeq extract_blocks(const BandedWindow& w, int p, double tol = 1e-11);

/// Extreme-diagonal block entries of Delta_{J0}(J) from the closed forms:
/// outer (distance p) and subouter (distance p-1) at row m.
struct FastEntries {
  double outer;
  double subouter;
};
FastEntries fast_block_entries(const JacobiSeq& seq, const PeriodicJacobi& j0, long m);

/// Six equivalent square-summability quantities for Delta_{J0}(J)-(S^p+S^-p),
/// as partial-sum sequences over the first N blocks, plus the period-shift
/// difference sums.
struct SquareSummabilityReport {
  std::vector<double> hs;              // (i)   Hilbert-Schmidt norm^2
  std::vector<double> block_l2;        // (ii)  sum Tr(B_n^2 + |A_n-1|^2)
  std::vector<double> abs_block_l2;    // (iii) sum Tr(B_n^2 + (|A_n|-1)^2)
  std::vector<double> g_block;         // (iv)  sum Tr(B_n^2 + G(|A_n|))
  std::vector<double> dist_sq;         // (v)   sum d_m^2   (surrogate distance)
  std::vector<double> tilde_dist_sq;   // (vi)  sum d~_m^2  (surrogate distance)
  std::vector<double> prod_diff_sq;    // sum (a_n...a_{n+p-1} - a0 product)^2
  std::vector<double> bsum_diff_sq;    // sum (sum_j b_{n+j} - b0 sum)^2
  std::vector<double> a_shift_sq;      // sum (a_{n+p} - a_n)^2
  std::vector<double> b_shift_sq;      // sum (b_{n+p} - b_n)^2
};

SquareSummabilityReport square_summability_report(const JacobiSeq& seq, const PeriodicJacobi& j0,
                                                  int blocks);

struct DiagonalDecomposition {
  std::map<int, std::vector<double>> diagonals;          // D_j sequences (abs values)
  std::map<int, std::vector<std::complex<double>>> raw;  // D_j sequences
  double periodicity_residual = 0.0;  // max |D_j(n+p) - D_j(n)| over interior
  double commutator_residual = 0.0;   // sup |[A, S^p + S^-p]| entry over interior
  long first_row = 0;
};

/// Writes the banded window as sum_j D_j S^j and reports how far the
/// diagonals are from p-periodic, together with the commutator residual
/// against S^p + S^-p.
DiagonalDecomposition naiman_decompose(const BandedWindow& w, int p);

}  // namespace perispec

#endif
