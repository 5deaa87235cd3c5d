// SPDX-License-Identifier: Apache-2.0

#include "perispec/magic.hpp"

#include <algorithm>
#include <cmath>

#include "perispec/errors.hpp"
#include "perispec/torus.hpp"

namespace perispec {

BandedWindow::BandedWindow(long lo, long hi, int bw, bool hard_lo, bool hard_hi)
    : lo_(lo), hi_(hi), bw_(bw), hard_lo_(hard_lo), hard_hi_(hard_hi) {
  if (hi < lo) throw InputError("BandedWindow: empty row range");
  data_.assign(static_cast<std::size_t>(rows()) * (2 * bw + 1), 0.0);
}

std::complex<double>& BandedWindow::at(long i, long j) {
  if (i < lo_ || i > hi_ || std::abs(i - j) > bw_)
    throw InputError("BandedWindow: index outside band");
  return data_[static_cast<std::size_t>(i - lo_) * (2 * bw_ + 1) + (j - i + bw_)];
}

std::complex<double> BandedWindow::entry(long i, long j) const {
  if (i < lo_ || i > hi_ || j < lo_ || j > hi_ || std::abs(i - j) > bw_) return 0.0;
  return data_[static_cast<std::size_t>(i - lo_) * (2 * bw_ + 1) + (j - i + bw_)];
}

BandedWindow BandedWindow::multiply(const BandedWindow& o) const {
  if (lo_ != o.lo_ || hi_ != o.hi_) throw InputError("BandedWindow: range mismatch in multiply");
  BandedWindow r(lo_, hi_, bw_ + o.bw_, hard_lo_, hard_hi_);
  for (long i = lo_; i <= hi_; ++i) {
    for (long j = std::max(lo_, i - r.bw_); j <= std::min(hi_, i + r.bw_); ++j) {
      std::complex<double> s = 0.0;
      long k0 = std::max({lo_, i - bw_, j - o.bw_});
      long k1 = std::min({hi_, i + bw_, j + o.bw_});
      for (long k = k0; k <= k1; ++k) s += entry(i, k) * o.entry(k, j);
      r.at(i, j) = s;
    }
  }
  // Rows within reach of a soft edge see a truncated sum.
  int sl = hard_lo_ ? std::max(soil_lo_, o.soil_lo_) : std::max(soil_lo_, o.soil_lo_ + bw_);
  int sh = hard_hi_ ? std::max(soil_hi_, o.soil_hi_) : std::max(soil_hi_, o.soil_hi_ + bw_);
  r.soil_lo_ = std::min<int>(sl, rows());
  r.soil_hi_ = std::min<int>(sh, rows());
  return r;
}

void BandedWindow::add_scaled_identity(std::complex<double> c) {
  for (long i = lo_; i <= hi_; ++i) at(i, i) += c;
}

void BandedWindow::scale(std::complex<double> c) {
  for (auto& v : data_) v *= c;
}

void BandedWindow::subtract_shift_pair(int p) {
  if (bw_ < p) throw InputError("BandedWindow: bandwidth too small for shift pair");
  for (long i = lo_; i <= hi_; ++i) {
    if (i - p >= lo_) at(i, i - p) -= 1.0;
    if (i + p <= hi_) at(i, i + p) -= 1.0;
  }
}

void BandedWindow::set_margins(int lo_m, int hi_m) {
  soil_lo_ = std::min<int>(std::max(soil_lo_, lo_m), rows());
  soil_hi_ = std::min<int>(std::max(soil_hi_, hi_m), rows());
}

BandedWindow jacobi_window(const JacobiSeq& seq) {
  seq.validate();
  BandedWindow w(seq.lo(), seq.hi(), 1, !seq.two_sided, false);
  for (long i = seq.lo(); i <= seq.hi(); ++i) {
    w.at(i, i) = seq.b_at(i);
    if (i + 1 <= seq.hi()) {
      w.at(i, i + 1) = seq.a_at(i);
      w.at(i + 1, i) = seq.a_at(i);
    }
  }
  return w;
}

namespace {

BandedWindow cmv_factor_window(const VerblunskySeq& seq, bool inverse) {
  // Shrink so every requested entry has its coefficients inside the window;
  // the resulting entries are exact operator entries.
  long lo = seq.two_sided ? seq.lo() + 3 : 0;
  long hi = seq.hi() - 3;
  if (hi - lo < 1) throw InputError("cmv_banded_window: window too short");
  Matrix c = inverse ? cmv_inverse_window(seq, lo, hi) : cmv_window(seq, lo, hi);
  BandedWindow w(lo, hi, 2, !seq.two_sided, false);
  for (long i = lo; i <= hi; ++i)
    for (long j = std::max(lo, i - 2); j <= std::min(hi, i + 2); ++j)
      w.at(i, j) = c(static_cast<int>(i - lo), static_cast<int>(j - lo));
  return w;
}

}  // namespace

BandedWindow cmv_banded_window(const VerblunskySeq& seq) {
  seq.validate();
  return cmv_factor_window(seq, false);
}

BandedWindow apply_poly(const JacobiSeq& seq, const Discriminant& d) {
  const int p = d.period;
  if (static_cast<long>(seq.b.size()) < 3L * p)
    throw InputError("apply_poly: window shorter than 3p");
  BandedWindow j = jacobi_window(seq);
  const RealPoly& poly = d.poly;
  const int deg = poly.degree();
  BandedWindow q(j.lo(), j.hi(), 0, j.hard_lo(), j.hard_hi());
  q.add_scaled_identity(poly.coeff(deg));
  for (int k = deg - 1; k >= 0; --k) {
    q = q.multiply(j);
    q.add_scaled_identity(poly.coeff(k));
  }
  q.set_margins(j.hard_lo() ? 0 : p, j.hard_hi() ? 0 : p);
  return q;
}

BandedWindow apply_poly(const VerblunskySeq& seq, const LaurentPoly& d) {
  seq.validate();
  BandedWindow c = cmv_factor_window(seq, false);
  const int kmax = d.max_exp(), kmin = d.min_exp();

  // Positive powers via Horner in C, negative powers via Horner in C^{-1}.
  BandedWindow pos(c.lo(), c.hi(), 0, c.hard_lo(), c.hard_hi());
  if (kmax >= 1) {
    pos.add_scaled_identity(d.coeff(kmax));
    for (int k = kmax - 1; k >= 1; --k) {
      pos = pos.multiply(c);
      pos.add_scaled_identity(d.coeff(k));
    }
    pos = pos.multiply(c);
  }
  BandedWindow neg(c.lo(), c.hi(), 0, c.hard_lo(), c.hard_hi());
  if (kmin <= -1) {
    BandedWindow ci = cmv_factor_window(seq, true);
    neg.add_scaled_identity(d.coeff(kmin));
    for (int k = kmin + 1; k <= -1; ++k) {
      neg = neg.multiply(ci);
      neg.add_scaled_identity(d.coeff(k));
    }
    neg = neg.multiply(ci);
  }

  const int bw = std::max(pos.bandwidth(), neg.bandwidth());
  BandedWindow acc(c.lo(), c.hi(), bw, c.hard_lo(), c.hard_hi());
  for (long i = acc.lo(); i <= acc.hi(); ++i)
    for (long j = std::max(acc.lo(), i - bw); j <= std::min(acc.hi(), i + bw); ++j)
      acc.at(i, j) = pos.entry(i, j) + neg.entry(i, j) + (i == j ? d.coeff(0) : 0.0);
  acc.set_margins(std::max(pos.margin_lo(), neg.margin_lo()),
                  std::max(pos.margin_hi(), neg.margin_hi()));

  const int p = std::max(2 * kmax, -2 * kmin);
  acc.set_margins(acc.hard_lo() ? 0 : p, p);
  return acc;
}

namespace {

ResidualReport report_from_window(BandedWindow w, int p) {
  w.subtract_shift_pair(p);
  ResidualReport rep;
  // The identity is an interior statement: on a half line the first p rows
  // carry genuine (exact) edge entries that differ from the two-sided
  // operator, so they are excluded from the residual.
  long lo = w.exact_lo() + (w.hard_lo() ? p : 0);
  long hi = w.exact_hi();
  if (hi < lo) throw InputError("magic_residual: no exact interior rows");
  rep.first_row = lo;
  for (int k = -w.bandwidth(); k <= w.bandwidth(); ++k) rep.diagonal[k] = {};
  for (long i = lo; i <= hi; ++i) {
    for (int k = -w.bandwidth(); k <= w.bandwidth(); ++k) {
      long j = i + k;
      double v = (j >= w.exact_lo() && j <= hi) ? std::abs(w.entry(i, j)) : 0.0;
      rep.diagonal[k].push_back(v);
      if (j >= i && j >= lo) rep.sup = std::max(rep.sup, v);
    }
  }
  BlockSeq blocks = extract_blocks(w, p, 1e30 /* pattern check not meaningful here */);
  double hs = 0.0, bn = 0.0;
  // Skip the half-line edge block for the same reason.
  for (std::size_t n = w.hard_lo() ? 1 : 0; n < blocks.B.size(); ++n) {
    double hs_b = blocks.B[n].frobenius();
    double hs_a = (n < blocks.A.size()) ? blocks.A[n].frobenius() : 0.0;
    hs += hs_b * hs_b + 2.0 * hs_a * hs_a;
    rep.hs_partial.push_back(hs);
    bn += operator_norm(blocks.B[n]) + ((n < blocks.A.size()) ? operator_norm(blocks.A[n]) : 0.0);
    rep.block_norm_partial.push_back(bn);
  }
  return rep;
}

}  // namespace

ResidualReport magic_residual(const JacobiSeq& seq, const PeriodicJacobi& j0) {
  return report_from_window(apply_poly(seq, discriminant_oprl(j0)), j0.period());
}

ResidualReport magic_residual(const VerblunskySeq& seq, const PeriodicVerblunsky& v0) {
  return report_from_window(apply_poly(seq, discriminant_opuc(v0)), v0.period());
}

BlockSeq extract_blocks(const BandedWindow& w, int p, double tol) {
  if (w.bandwidth() > 2 * p + 1) throw InputError("extract_blocks: bandwidth exceeds 2p+1");
  BlockSeq out;
  out.l = p;
  long anchor = w.hard_lo() ? w.lo() : w.exact_lo();
  long hi = w.exact_hi();
  const double scale = [&] {
    double s = 0.0;
    for (long i = w.exact_lo(); i <= hi; ++i)
      for (long j = std::max(w.lo(), i - w.bandwidth()); j <= std::min(w.hi(), i + w.bandwidth());
           ++j)
        s = std::max(s, std::abs(w.entry(i, j)));
    return std::max(s, 1e-300);
  }();
  for (long r0 = anchor; r0 + 2L * p - 1 <= hi; r0 += p) {
    Matrix b(p, p), a(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) {
        b(i, j) = w.entry(r0 + i, r0 + j);
        a(i, j) = w.entry(r0 + i, r0 + p + j);
      }
    // entries beyond the adjacent block must vanish
    for (int i = 0; i < p; ++i)
      for (long j = r0 + 2 * p; j <= std::min(w.hi(), r0 + i + w.bandwidth()); ++j)
        if (std::abs(w.entry(r0 + i, j)) > tol * scale)
          throw StructuralError("extract_blocks: entry outside block tridiagonal pattern");
    out.B.push_back(std::move(b));
    out.A.push_back(std::move(a));
  }
  return out;
}

FastEntries fast_block_entries(const JacobiSeq& seq, const PeriodicJacobi& j0, long m) {
  const int p = j0.period();
  double prod_a = 1.0, prod_a0 = 1.0, prod_short = 1.0, bdiff = 0.0;
  for (int j = 0; j < p; ++j) {
    prod_a *= seq.a_at(m + j);
    prod_a0 *= j0.a_at(m + j);
    if (j < p - 1) prod_short *= seq.a_at(m + j);
    bdiff += seq.b_at(m + j) - j0.b_at(m + j);
  }
  return {prod_a / prod_a0, prod_short * bdiff / prod_a0};
}

SquareSummabilityReport square_summability_report(const JacobiSeq& seq, const PeriodicJacobi& j0,
                                                  int blocks) {
  seq.validate();
  if (seq.two_sided) throw InputError("square_summability_report: one-sided sequence required");
  const int p = j0.period();
  const long tail_pad = 41;
  const long need = static_cast<long>(p) * (blocks + 2) + tail_pad;
  if (seq.hi() < need)
    throw InputError("square_summability_report: window too short for requested block count");

  BandedWindow w = apply_poly(seq, discriminant_oprl(j0));
  w.subtract_shift_pair(p);
  BlockSeq bl = extract_blocks(w, p, 1e30);
  // Block 1 carries genuine half-line edge entries that never vanish, even
  // on the reference operator; the square-summability statement concerns the
  // tail, so the sums start at block 2 / site p + 1.
  if (static_cast<int>(bl.A.size()) < blocks + 1)
    throw InputError("square_summability_report: not enough exact blocks");

  auto g_of = [](double x) { return x * x - 1.0 - std::log(x * x); };

  SquareSummabilityReport rep;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;

  // Surrogate distances per site, capped by the direct metric to J0 itself.
  const long msite_hi = static_cast<long>(p) * (blocks + 1) + tail_pad;
  std::vector<double> dtil(static_cast<std::size_t>(msite_hi) + 1, 0.0);
  for (long m = 1; m <= msite_hi; ++m) {
    std::vector<double> wa(p), wb(p);
    for (int j = 0; j < p; ++j) {
      wa[j] = seq.a_at(m + j);
      wb[j] = seq.b_at(m + j);
    }
    double mism = coeff_mismatch(PeriodicJacobi(wa, wb), j0);
    double direct = 0.0;
    for (int j = 0; j < p; ++j)
      direct += std::abs(wa[j] - j0.a_at(m + j)) + std::abs(wb[j] - j0.b_at(m + j));
    dtil[m] = std::min(mism, direct);
  }
  std::vector<double> dfull(dtil.size(), 0.0);
  for (long m = 1; m + 40 <= msite_hi; ++m) {
    double s = 0.0, wgt = 1.0;
    for (int k = 0; k < 40; ++k, wgt *= std::exp(-1.0)) s += wgt * dtil[m + k];
    dfull[m] = s;
  }

  double s5 = 0, s6 = 0, f2a = 0, f2b = 0, f2c = 0, f2d = 0;
  double prod0 = 1.0, bsum0 = 0.0;
  for (int j = 1; j <= p; ++j) {
    prod0 *= j0.a_at(j);
    bsum0 += j0.b_at(j);
  }

  for (int n = 0; n < blocks; ++n) {
    const Matrix& B = bl.B[n + 1];
    const Matrix& Am1 = bl.A[n + 1];  // residual window already has A_n - 1 stored
    Matrix A = Am1 + Matrix::identity(p);
    double trB2 = 0.0;
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) trB2 += std::norm(B(i, j));
    double hsA = Am1.frobenius();
    s1 += trB2 + 2.0 * hsA * hsA;
    s2 += trB2 + hsA * hsA;
    auto sv = singular_values(A);
    double t3 = trB2, t4 = trB2;
    for (double s : sv) {
      t3 += (s - 1.0) * (s - 1.0);
      t4 += g_of(s);
    }
    s3 += t3;
    s4 += t4;
    rep.hs.push_back(s1);
    rep.block_l2.push_back(s2);
    rep.abs_block_l2.push_back(s3);
    rep.g_block.push_back(s4);

    for (int j = 1; j <= p; ++j) {
      long m = static_cast<long>(p) * (n + 1) + j;
      s6 += dtil[m] * dtil[m];
      s5 += dfull[m] * dfull[m];
      double prod = 1.0, bsum = 0.0, prod_next = 1.0;
      for (int k = 0; k < p; ++k) {
        prod *= seq.a_at(m + k);
        bsum += seq.b_at(m + k);
      }
      (void)prod_next;
      f2a += (prod - prod0) * (prod - prod0);
      f2b += (bsum - bsum0) * (bsum - bsum0);
      double da = seq.a_at(m + p) - seq.a_at(m);
      double db = seq.b_at(m + p) - seq.b_at(m);
      f2c += da * da;
      f2d += db * db;
    }
    rep.dist_sq.push_back(s5);
    rep.tilde_dist_sq.push_back(s6);
    rep.prod_diff_sq.push_back(f2a);
    rep.bsum_diff_sq.push_back(f2b);
    rep.a_shift_sq.push_back(f2c);
    rep.b_shift_sq.push_back(f2d);
  }
  return rep;
}

DiagonalDecomposition naiman_decompose(const BandedWindow& w, int p) {
  DiagonalDecomposition out;
  long lo = w.exact_lo(), hi = w.exact_hi();
  if (hi - lo + 1 < 2 * p + 2) throw InputError("naiman_decompose: exact region too short");
  out.first_row = lo;
  for (int k = -w.bandwidth(); k <= w.bandwidth(); ++k) {
    std::vector<double> absd;
    std::vector<std::complex<double>> raw;
    // rows where the column index i - k also lies in the window
    for (long i = std::max(lo, lo + k); i <= std::min(hi, hi + k); ++i) {
      raw.push_back(w.entry(i, i - k));
      absd.push_back(std::abs(raw.back()));
    }
    for (std::size_t n = 0; n + p < raw.size(); ++n)
      out.periodicity_residual =
          std::max(out.periodicity_residual, std::abs(raw[n + p] - raw[n]));
    out.diagonals[k] = std::move(absd);
    out.raw[k] = std::move(raw);
  }
  // [A, S^p + S^-p]_{ij} = A_{i,j-p} + A_{i,j+p} - A_{i-p,j} - A_{i+p,j}
  for (long i = lo + p; i <= hi - p; ++i)
    for (long j = std::max(lo + p, i - w.bandwidth() - p);
         j <= std::min(hi - p, i + w.bandwidth() + p); ++j) {
      std::complex<double> c =
          w.entry(i, j - p) + w.entry(i, j + p) - w.entry(i - p, j) - w.entry(i + p, j);
      out.commutator_residual = std::max(out.commutator_residual, std::abs(c));
    }
  return out;
}

}  // namespace perispec
