// SPDX-License-Identifier: Apache-2.0

#include "perispec/sumrules.hpp"

#include <algorithm>
#include <cmath>

#include "perispec/errors.hpp"
#include "perispec/quadrature.hpp"

namespace perispec {

double F_of_E(double e) {
  if (!(std::abs(e) > 2.0)) throw EvalDomainError("F_of_E: |E| must exceed 2");
  double beta = 0.5 * (e + (e > 0 ? 1.0 : -1.0) * std::sqrt(e * e - 4.0));
  double b2 = beta * beta;
  return 0.25 * (b2 - 1.0 / b2) - std::log(std::abs(beta));
}

double G_of_a(double a) {
  if (!(a > 0.0)) throw EvalDomainError("G_of_a: a must be positive");
  return a * a - 1.0 - std::log(a * a);
}

std::complex<double> blaschke_factor(std::complex<double> z, double a) {
  if (!(std::abs(a) < 1.0)) throw InputError("blaschke_factor: a must lie in (-1,1)");
  if (a > 0.0) return (a - z) / (1.0 - a * z);
  return (z - a) / (1.0 - a * z);
}

std::complex<double> blaschke_B(std::complex<double> z, const std::vector<double>& zeros,
                                const std::vector<double>& poles, double r_cut) {
  std::complex<double> b = 1.0;
  for (double a : zeros)
    if (std::abs(a) < r_cut) b *= blaschke_factor(z, a);
  for (double a : poles) {
    if (std::abs(a) >= r_cut) continue;
    std::complex<double> f = blaschke_factor(z, a);
    if (std::abs(f) == 0.0) throw EvalDomainError("blaschke_B: z is a pole of the product");
    b /= f;
  }
  return b;
}

namespace {

constexpr double kThetaClamp = 1e-9;

// log(sin^l t / det Im M(e^{it})), continuous at t in {0, pi}; evaluated with
// t clamped away from the endpoints.
double log_ratio_free(const BlockJacobi& j, double t) {
  t = std::clamp(t, kThetaClamp, M_PI - kThetaClamp);
  Matrix m = m_disk(j, std::polar(1.0, t));
  Matrix im = imag_part(m);
  double det_im = (j.l == 1) ? im(0, 0).real() : determinant(im).real();
  double num = std::pow(std::sin(t), j.l);
  double ratio = num / det_im;
  if (!(ratio > 0.0)) throw NumericError("boundary ratio not positive");
  return std::log(ratio);
}

// log(det Im M^(1) / det Im M) at e^{it}.
double log_step_ratio(const BlockJacobi& j, const BlockJacobi& j1, double t) {
  t = std::clamp(t, kThetaClamp, M_PI - kThetaClamp);
  std::complex<double> z = std::polar(1.0, t);
  cdouble d0 = determinant(imag_part(m_disk(j, z)));
  cdouble d1 = determinant(imag_part(m_disk(j1, z)));
  double ratio = d1.real() / d0.real();
  if (!(ratio > 0.0)) throw NumericError("step boundary ratio not positive");
  return std::log(ratio);
}

std::vector<double> disk_poles(const BlockJacobi& j) {
  std::vector<double> zs;
  double bound = 2.0;
  const int n = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size())) + 1;
  for (int k = 1; k <= n; ++k)
    bound = std::max(bound, operator_norm(j.B_at(k)) + operator_norm(j.A_at(k)) +
                                (k > 1 ? operator_norm(j.A_at(k - 1)) : 0.0));
  bound += 1.0;
  double z_min = std::max(1e-4, 0.45 * (bound - std::sqrt(bound * bound - 4.0)));
  for (double sgn : {-1.0, 1.0}) {
    double lo = sgn < 0 ? -0.999 : z_min;
    double hi = sgn < 0 ? -z_min : 0.999;
    for (const auto& pole : poles_of_det_m(j, lo, hi))
      for (int k = 0; k < pole.order; ++k) zs.push_back(pole.z);
  }
  std::sort(zs.begin(), zs.end());
  return zs;
}

double block_coefficient_sum(const BlockJacobi& j) {
  double s = 0.0;
  const int n = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size()));
  for (int k = 1; k <= n; ++k) {
    Matrix b = j.B_at(k);
    double tr_b2 = 0.0;
    for (int i = 0; i < j.l; ++i)
      for (int jj = 0; jj < j.l; ++jj) tr_b2 += std::norm(b(i, jj));
    double g = 0.0;
    for (double sv : singular_values(j.A_at(k))) g += G_of_a(sv);
    s += 0.25 * tr_b2 + 0.5 * g;
  }
  return s;
}

}  // namespace

SumRuleReport p2_sides(const BlockJacobi& j, double quad_tol) {
  j.validate();
  if (!j.free_tail) throw InputError("p2_sides: free tail required");
  SumRuleReport rep;
  rep.quad_tol = quad_tol;
  // Integrand is even in theta, so integrate over [0, pi] with weight 1/pi.
  rep.boundary_integral =
      quad_adaptive([&](double t) { return log_ratio_free(j, t) * std::sin(t) * std::sin(t); },
                    0.0, M_PI, quad_tol) /
      M_PI;
  for (double e : eigenvalues_outside(j)) rep.eigenvalue_sum += F_of_E(e);
  rep.coefficient_sum = block_coefficient_sum(j);
  rep.lhs = rep.boundary_integral + rep.eigenvalue_sum;
  rep.rhs = rep.coefficient_sum;
  rep.residual = std::abs(rep.lhs - rep.rhs);
  return rep;
}

C0Terms c0_terms(const BlockJacobi& j, double quad_tol) {
  j.validate();
  if (!j.free_tail) throw InputError("c0_terms: free tail required");
  C0Terms t;
  t.Z = quad_adaptive([&](double u) { return log_ratio_free(j, u); }, 0.0, M_PI, quad_tol) /
        (2.0 * M_PI);
  for (double z : disk_poles(j)) t.E0 += std::log(1.0 / std::abs(z));
  const int n = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size()));
  for (int k = 1; k <= n; ++k) t.A0 -= std::log(std::abs(determinant(j.A_at(k))));
  t.residual = t.Z - t.A0 - t.E0;
  return t;
}

StepRuleResiduals step_sum_rules(const BlockJacobi& j, double quad_tol) {
  j.validate();
  if (!j.free_tail) throw InputError("step_sum_rules: free tail required");
  BlockJacobi j1 = j.stripped(1);

  auto poles0 = disk_poles(j);
  auto poles1 = disk_poles(j1);

  auto betas = [](const std::vector<double>& zs) {
    std::vector<double> b;
    for (double z : zs) b.push_back(1.0 / z);
    return b;
  };
  auto b0 = betas(poles0), b1 = betas(poles1);

  Matrix a1 = j.A_at(1);
  double logdet_abs_a1 = std::log(std::abs(determinant(a1)));
  double tr_b1 = j.B_at(1).trace().real();
  double tr_b1sq = 0.0;
  Matrix bb = j.B_at(1);
  for (int i = 0; i < j.l; ++i)
    for (int k = 0; k < j.l; ++k) tr_b1sq += std::norm(bb(i, k));
  double g1 = 0.0;
  for (double sv : singular_values(a1)) g1 += G_of_a(sv);

  // Even integrands: integrals over [0, 2pi] reduce to [0, pi].
  double i0 = quad_adaptive([&](double t) { return -log_step_ratio(j, j1, t); }, 0.0, M_PI,
                            quad_tol) /
              (2.0 * M_PI);
  double i1 = quad_adaptive([&](double t) { return -log_step_ratio(j, j1, t) * std::cos(t); },
                            0.0, M_PI, quad_tol) /
              M_PI;
  double i2 = quad_adaptive(
                  [&](double t) { return log_step_ratio(j, j1, t) * std::sin(t) * std::sin(t); },
                  0.0, M_PI, quad_tol) /
              M_PI;

  double sum_log0 = 0.0, sum_log1 = 0.0;
  for (double b : b0) sum_log0 += std::log(std::abs(b));
  for (double b : b1) sum_log1 += std::log(std::abs(b));
  StepRuleResiduals r;
  r.c0 = std::abs(i0 + sum_log0 - sum_log1 - logdet_abs_a1);

  double sum_b0 = 0.0, sum_b1 = 0.0;
  for (double b : b0) sum_b0 += b - 1.0 / b;
  for (double b : b1) sum_b1 += b - 1.0 / b;
  r.c1 = std::abs((i1 + sum_b0 - sum_b1) - tr_b1);

  double sum_f0 = 0.0, sum_f1 = 0.0;
  for (double z : poles0) sum_f0 += F_of_E(z + 1.0 / z);
  for (double z : poles1) sum_f1 += F_of_E(z + 1.0 / z);
  r.p2 = std::abs((i2 + sum_f0 - sum_f1) - (0.25 * tr_b1sq + 0.5 * g1));
  return r;
}

NonlocalCheck nonlocal_check(const BlockJacobi& j, const std::vector<std::complex<double>>& zs,
                             double quad_tol) {
  j.validate();
  if (!j.free_tail) throw InputError("nonlocal_check: free tail required");
  BlockJacobi j1 = j.stripped(1);
  auto poles0 = disk_poles(j);
  auto poles1 = disk_poles(j1);
  Matrix abs_a1 = abs_of(j.A_at(1));

  NonlocalCheck out;
  for (std::complex<double> z : zs) {
    if (!(std::abs(z) > 0.0) || !(std::abs(z) < 1.0))
      throw InputError("nonlocal_check: samples must lie in the open disk");
    double min_dist = 1.0;
    for (double p : poles0) min_dist = std::min(min_dist, std::abs(z - p));
    for (double p : poles1) min_dist = std::min(min_dist, std::abs(z - p));
    if (min_dist < 1e-4) {
      ++out.skipped;
      continue;
    }
    Matrix m = m_disk(j, z);
    cdouble lhs = determinant(abs_a1 * m * (1.0 / z));

    cdouble bprod = blaschke_B(z, poles1, poles0);  // zeros of det M <-> poles of M^(1)
    auto kernel_re = [&](double t) {
      std::complex<double> eit = std::polar(1.0, t);
      std::complex<double> k = (eit + z) / (eit - z) + (std::conj(eit) + z) / (std::conj(eit) - z);
      return (k * (-log_step_ratio(j, j1, t))).real();
    };
    auto kernel_im = [&](double t) {
      std::complex<double> eit = std::polar(1.0, t);
      std::complex<double> k = (eit + z) / (eit - z) + (std::conj(eit) + z) / (std::conj(eit) - z);
      return (k * (-log_step_ratio(j, j1, t))).imag();
    };
    double re = quad_adaptive(kernel_re, 0.0, M_PI, quad_tol) / (4.0 * M_PI);
    double im = quad_adaptive(kernel_im, 0.0, M_PI, quad_tol) / (4.0 * M_PI);
    cdouble rhs = bprod * std::exp(cdouble(re, im));
    out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
    out.arg_b_samples.push_back(std::arg(bprod));
  }
  return out;
}

DetWCheck detw_check(const PeriodicJacobi& j0, const std::function<double(double)>& omega,
                     double e) {
  j0.validate();
  if (!(std::abs(e) < 2.0)) throw EvalDomainError("detw_check: E must lie in (-2,2)");
  const int p = j0.period();
  Discriminant d = discriminant_oprl(j0);
  BandSet bs = bands(d);
  double lo = bs.bands.front().first - 1.0, hi = bs.bands.back().second + 1.0;
  auto roots = real_roots(d.poly - RealPoly::constant(e), lo, hi, 1e-13);
  DetWCheck out;
  for (const auto& r : roots) {
    if (r.multiplicity > 1)
      throw EvalDomainError("detw_check: E has a multiple preimage (closed-gap image)");
    out.preimages.push_back(r.x);
  }
  if (static_cast<int>(out.preimages.size()) != p)
    throw NumericError("detw_check: expected p preimages");

  RealPoly dp = d.poly.derivative();
  JacobiSeq seq = JacobiSeq::from_periodic(j0, 1, p + 1, false);
  Matrix w(p, p);
  for (double x : out.preimages) {
    auto polys = orthonormal_polys(seq, p - 1, x);
    double weight = omega(x) / std::abs(dp(x));
    for (int k = 0; k < p; ++k)
      for (int l = 0; l < p; ++l) w(k, l) += weight * polys[k] * polys[l];
  }
  out.lhs = determinant(w).real();

  double prod_pow = 1.0, prod_a0 = 1.0, prod_omega = 1.0;
  for (int jj = 1; jj <= p; ++jj) {
    prod_pow *= std::pow(j0.a[jj - 1], p - jj);
    prod_a0 *= j0.a[jj - 1];
  }
  for (double x : out.preimages) prod_omega *= omega(x);
  out.rhs = std::pow(prod_pow, -2.0) * std::pow(prod_a0, p) * prod_omega;
  return out;
}

namespace {

// Weights below double-precision underflow are genuine zeros as far as this
// check can tell; their |log| is replaced by a large sentinel so that the
// flagged-infinite outcome is consistent on both sides of the transform.
double abs_log_clamped(double v) {
  if (!(v > 1e-290)) return 1e6;
  return std::abs(std::log(v));
}

}  // namespace

WeightTransform weight_transform_check(const PeriodicJacobi& j0,
                                       const std::function<double(double)>& omega, double alpha,
                                       double quad_tol) {
  if (!(alpha > -1.0)) throw InputError("weight_transform_check: alpha must exceed -1");
  Discriminant d = discriminant_oprl(j0);
  BandSet bs = bands(d);
  WeightTransform out;

  const double huge = 1e4;
  auto lhs_integrand = [&](double e) {
    double val;
    try {
      val = abs_log_clamped(detw_check(j0, omega, e).lhs);
    } catch (const EvalDomainError&) {
      return 0.0;  // closed-gap image, measure-zero set
    }
    return std::pow(std::max(4.0 - e * e, 1e-300), alpha) * val;
  };
  try {
    EndpointRule rule = alpha < 0.0 ? EndpointRule::sqrt_both : EndpointRule::none;
    out.lhs = quad_adaptive(lhs_integrand, -2.0 + 1e-9, 2.0 - 1e-9, quad_tol, rule);
    if (!(out.lhs < huge)) out.lhs_finite = false;
  } catch (const NumericError&) {
    out.lhs_finite = false;
  }

  double rhs = 0.0;
  bool rhs_ok = true;
  for (const auto& band : bs.bands) {
    double a = band.first, b = band.second, mid = 0.5 * (a + b);
    auto f_lo = [&](double x) {
      return std::pow(std::max(x - a, 1e-300), alpha) * abs_log_clamped(omega(x));
    };
    auto f_hi = [&](double x) {
      return std::pow(std::max(b - x, 1e-300), alpha) * abs_log_clamped(omega(x));
    };
    try {
      EndpointRule rl = alpha < 0.0 ? EndpointRule::sqrt_lo : EndpointRule::none;
      EndpointRule rh = alpha < 0.0 ? EndpointRule::sqrt_hi : EndpointRule::none;
      rhs += quad_adaptive(f_lo, a + 1e-12, mid, quad_tol, rl);
      rhs += quad_adaptive(f_hi, mid, b - 1e-12, quad_tol, rh);
    } catch (const NumericError&) {
      rhs_ok = false;
      break;
    }
  }
  out.rhs = rhs;
  out.rhs_finite = rhs_ok && rhs < huge;
  return out;
}

}  // namespace perispec
