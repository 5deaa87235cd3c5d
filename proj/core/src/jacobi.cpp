// SPDX-License-Identifier: Apache-2.0

#include "perispec/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perispec/errors.hpp"
#include "perispec/quadrature.hpp"

namespace perispec {

namespace {
long floor_mod(long n, long p) {
  long r = n % p;
  return r < 0 ? r + p : r;
}
}  // namespace

PeriodicJacobi::PeriodicJacobi(std::vector<double> a_in, std::vector<double> b_in)
    : a(std::move(a_in)), b(std::move(b_in)) {
  validate();
}

void PeriodicJacobi::validate() const {
  if (a.empty() || a.size() != b.size())
    throw InputError("PeriodicJacobi: a and b must be nonempty and of equal length");
  for (double v : a)
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("PeriodicJacobi: a_j must be positive");
  for (double v : b)
    if (!std::isfinite(v)) throw InputError("PeriodicJacobi: b_j must be finite");
}

double PeriodicJacobi::a_at(long n) const { return a[floor_mod(n - 1, period())]; }
double PeriodicJacobi::b_at(long n) const { return b[floor_mod(n - 1, period())]; }

PeriodicJacobi PeriodicJacobi::shifted(int k) const {
  const int p = period();
  std::vector<double> sa(p), sb(p);
  for (int j = 0; j < p; ++j) {
    sa[j] = a[floor_mod(j + k, p)];
    sb[j] = b[floor_mod(j + k, p)];
  }
  PeriodicJacobi r;
  r.a = std::move(sa);
  r.b = std::move(sb);
  return r;
}

void JacobiSeq::validate() const {
  if (a.size() != b.size()) throw InputError("JacobiSeq: a and b must have equal length");
  if (!two_sided && offset != 1) throw InputError("JacobiSeq: one-sided windows start at 1");
  for (double v : a)
    if (!(v > 0.0)) throw InputError("JacobiSeq: a_n must be positive");
}

double JacobiSeq::a_at(long n) const {
  if (n < lo() || n > hi()) throw InputError("JacobiSeq: index out of window");
  return a[static_cast<std::size_t>(n - offset)];
}

double JacobiSeq::b_at(long n) const {
  if (n < lo() || n > hi()) throw InputError("JacobiSeq: index out of window");
  return b[static_cast<std::size_t>(n - offset)];
}

JacobiSeq JacobiSeq::from_periodic(const PeriodicJacobi& j0, long lo, long hi, bool two_sided) {
  JacobiSeq s;
  s.offset = lo;
  s.two_sided = two_sided;
  for (long n = lo; n <= hi; ++n) {
    s.a.push_back(j0.a_at(n));
    s.b.push_back(j0.b_at(n));
  }
  return s;
}

Mobius2 transfer_step(double a, double b, std::complex<double> x) {
  if (!(a > 0.0)) throw InputError("transfer_step: a must be positive");
  Mobius2 t;
  t.t11 = (x - b) / a;
  t.t12 = -1.0 / a;
  t.t21 = a;
  t.t22 = 0.0;
  return t;
}

Discriminant discriminant_oprl(const PeriodicJacobi& j0) {
  j0.validate();
  const int p = j0.period();
  // 2x2 transfer product with RealPoly entries, T = L_p ... L_1,
  // L_j = (1/a_j) [[x - b_j, -1], [a_j^2, 0]].
  RealPoly t11 = RealPoly::constant(1.0), t12, t21, t22 = RealPoly::constant(1.0);
  bool first = true;
  for (int j = 0; j < p; ++j) {
    const double a = j0.a[j], b = j0.b[j];
    RealPoly l11 = (RealPoly::x() - b) * (1.0 / a);
    const double l12 = -1.0 / a;
    const double l21 = a;
    if (first) {
      t11 = l11;
      t12 = RealPoly::constant(l12);
      t21 = RealPoly::constant(l21);
      t22 = RealPoly();
      first = false;
      continue;
    }
    RealPoly n11 = l11 * t11 + t21 * l12;
    RealPoly n12 = l11 * t12 + t22 * l12;
    RealPoly n21 = t11 * l21;
    RealPoly n22 = t12 * l21;
    t11 = n11;
    t12 = n12;
    t21 = n21;
    t22 = n22;
  }
  Discriminant d;
  d.poly = t11 + t22;
  d.period = p;
  d.capacity = capacity(j0);
  return d;
}

double capacity(const PeriodicJacobi& j0) {
  double s = 0.0;
  for (double v : j0.a) s += std::log(v);
  return std::exp(s / j0.period());
}

BandSet bands(const Discriminant& d, double tol) {
  const int p = d.period;
  const RealPoly& delta = d.poly;
  // Cauchy bound on the roots of Delta -+ 2.
  double lead = delta.coeff(delta.degree());
  double bound = 1.0;
  for (int k = 0; k < delta.degree(); ++k)
    bound = std::max(bound, std::abs(delta.coeff(k)) + 2.0);
  bound = 1.0 + bound / std::abs(lead);

  auto minus = real_roots(delta - RealPoly::constant(2.0), -bound, bound, tol);
  auto plus = real_roots(delta + RealPoly::constant(2.0), -bound, bound, tol);

  struct Edge {
    double x;
    int mult;
  };
  std::vector<Edge> edges;
  for (const auto& r : minus) edges.push_back({r.x, r.multiplicity});
  for (const auto& r : plus) edges.push_back({r.x, r.multiplicity});
  std::sort(edges.begin(), edges.end(), [](const Edge& u, const Edge& v) { return u.x < v.x; });

  int count = 0;
  for (const auto& e : edges) count += e.mult;
  if (count != 2 * p)
    throw NumericError("bands: expected " + std::to_string(2 * p) + " roots of Delta^2-4, found " +
                       std::to_string(count));

  // Walk edges left to right: simple roots open/close bands, double roots are
  // closed gaps (band touching points).
  BandSet out;
  const double merge = 1e-8 * std::max(1.0, bound);
  std::vector<double> simple;
  std::vector<double> doubles;
  for (const auto& e : edges) {
    if (e.mult >= 2)
      doubles.push_back(e.x);
    else
      simple.push_back(e.x);
  }
  // Merge nearly coincident simple roots into double roots (numerically split
  // closed gaps).
  std::vector<double> sim2;
  for (std::size_t i = 0; i < simple.size();) {
    if (i + 1 < simple.size() && simple[i + 1] - simple[i] <= merge) {
      doubles.push_back(0.5 * (simple[i] + simple[i + 1]));
      i += 2;
    } else {
      sim2.push_back(simple[i]);
      ++i;
    }
  }
  // Band edges: simple roots come in pairs (outer edges and open-gap edges);
  // each double root both closes and opens a band.
  std::vector<Edge> all;
  for (double x : sim2) all.push_back({x, 1});
  for (double x : doubles) all.push_back({x, 2});
  std::sort(all.begin(), all.end(), [](const Edge& u, const Edge& v) { return u.x < v.x; });

  bool in_band = false;
  double band_lo = 0.0;
  for (const auto& e : all) {
    if (e.mult == 1) {
      if (!in_band) {
        if (!out.bands.empty())
          out.open_gaps.push_back({out.bands.back().second, e.x});
        band_lo = e.x;
        in_band = true;
      } else {
        out.bands.push_back({band_lo, e.x});
        in_band = false;
      }
    } else {
      if (!in_band) throw NumericError("bands: double root outside a band");
      out.bands.push_back({band_lo, e.x});
      out.closed_gaps.push_back(e.x);
      band_lo = e.x;
    }
  }
  if (in_band) throw NumericError("bands: unterminated band");
  if (static_cast<int>(out.bands.size()) != p)
    throw NumericError("bands: expected " + std::to_string(p) + " bands, found " +
                       std::to_string(out.bands.size()));
  return out;
}

double harmonic_density(const Discriminant& d, double x) {
  double val = d.poly(x);
  double disc = 4.0 - val * val;
  if (!(disc > 0.0))
    throw EvalDomainError("harmonic_density: point not strictly inside a band");
  double dp = d.poly.derivative()(x);
  return (2.0 / d.period) * std::abs(dp) / std::sqrt(disc) / (2.0 * M_PI);
}

double band_mass(const Discriminant& d, const std::pair<double, double>& band, double tol) {
  auto f = [&](double x) { return harmonic_density(d, x); };
  // At a closed-gap edge Delta' vanishes with Delta^2 - 4, the density stays
  // bounded, and the inverse-square-root substitution does not apply; pull
  // such an edge inward instead.
  RealPoly dp = d.poly.derivative();
  double dscale = std::max(1.0, dp.scale());
  auto open_edge = [&](double e) { return std::abs(dp(e)) > 1e-7 * dscale; };
  bool lo_open = open_edge(band.first), hi_open = open_edge(band.second);
  double pull = 1e-7 * std::max(1.0, std::abs(band.second - band.first));
  double a = lo_open ? band.first : band.first + pull;
  double b = hi_open ? band.second : band.second - pull;
  EndpointRule rule = lo_open ? (hi_open ? EndpointRule::sqrt_both : EndpointRule::sqrt_lo)
                              : (hi_open ? EndpointRule::sqrt_hi : EndpointRule::none);
  return quad_adaptive(f, a, b, tol, rule);
}

double harmonic_moment(const PeriodicJacobi& j0, int k) {
  // (1/2pi) int_0^{2pi} (1/p) Tr(J0(theta)^k) dtheta; integrand is smooth and
  // periodic, so the trapezoid rule converges spectrally.
  const int p = j0.period();
  const int nodes = 1024;
  double s = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double theta = 2.0 * M_PI * i / nodes;
    auto eig = herm_eigen(floquet_fiber(j0, theta), false);
    for (double x : eig.values) s += std::pow(x, k);
  }
  return s / (nodes * p);
}

double lyapunov(const Discriminant& d, std::complex<double> z) {
  std::complex<double> half = 0.5 * d.poly(z);
  std::complex<double> root = std::sqrt(half * half - 1.0);
  double mag = std::max(std::abs(half + root), std::abs(half - root));
  if (mag < 1.0) mag = 1.0;  // inside bands both branches are unimodular
  return std::log(mag) / d.period;
}

Matrix floquet_fiber(const PeriodicJacobi& j0, double theta) {
  const int p = j0.period();
  Matrix m(p, p);
  const cdouble up = std::polar(1.0, theta);
  if (p == 1) {
    m(0, 0) = j0.b[0] + j0.a[0] * (up + std::conj(up));
    return m;
  }
  for (int i = 0; i < p; ++i) m(i, i) = j0.b[i];
  for (int i = 0; i + 1 < p; ++i) {
    m(i, i + 1) += j0.a[i];
    m(i + 1, i) += j0.a[i];
  }
  m(0, p - 1) += j0.a[p - 1] * std::conj(up);
  m(p - 1, 0) += j0.a[p - 1] * up;
  return m;
}

MQuadratic m_quadratic(const PeriodicJacobi& j0, std::complex<double> E) {
  // One coefficient-stripping step is m -> 1/(b_k - E - a_k^2 m), a Mobius map
  // with unimodular matrix (1/a_k) [[0, 1], [-a_k^2, b_k - E]].  The fixed
  // point of the p-fold composition F = f_1 o ... o f_p gives the quadratic;
  // unimodularity makes B^2 - 4AC = tr(F)^2 - 4 = Delta^2 - 4.
  const int p = j0.period();
  Mobius2 f = Mobius2::identity();
  for (int k = 0; k < p; ++k) {
    const double a = j0.a[k], b = j0.b[k];
    Mobius2 step;
    step.t11 = 0.0;
    step.t12 = 1.0 / a;
    step.t21 = -a;
    step.t22 = (b - E) / a;
    f = f.compose(step);
  }
  return {f.t21, f.t22 - f.t11, -f.t12};
}

namespace {

std::complex<double> pick_m_root(const MQuadratic& q, std::complex<double> E, double im_sign) {
  std::complex<double> disc = std::sqrt(q.B * q.B - 4.0 * q.A * q.C);
  std::complex<double> r1 = (-q.B + disc) / (2.0 * q.A);
  std::complex<double> r2 = (-q.B - disc) / (2.0 * q.A);
  bool ok1 = r1.imag() * im_sign > 0.0;
  bool ok2 = r2.imag() * im_sign > 0.0;
  if (ok1 && !ok2) return r1;
  if (ok2 && !ok1) return r2;
  if (!ok1 && !ok2)
    throw NumericError("periodic_m: both roots violate the Herglotz sign; discriminant " +
                       std::to_string(std::abs(disc)));
  // Both satisfy the sign (deep off-axis): take the one decaying like -1/E.
  return (std::abs(r1) < std::abs(r2)) ? r1 : r2;
}

}  // namespace

std::complex<double> periodic_m(const PeriodicJacobi& j0, std::complex<double> E) {
  MQuadratic q = m_quadratic(j0, E);
  if (E.imag() != 0.0) return pick_m_root(q, E, E.imag() > 0 ? 1.0 : -1.0);

  // Real E: boundary value from above.  Inside the bands the roots are a
  // conjugate pair; off the spectrum both are real and we continue from
  // E + i*eps.
  std::complex<double> disc2 = q.B * q.B - 4.0 * q.A * q.C;
  if (disc2.real() < 0.0) return pick_m_root(q, E, 1.0);
  double eps = 1e-7;
  for (int tries = 0; tries < 6; ++tries) {
    MQuadratic qe = m_quadratic(j0, E + std::complex<double>(0.0, eps));
    std::complex<double> up = pick_m_root(qe, E, 1.0);
    std::complex<double> droot = std::sqrt(disc2);
    std::complex<double> r1 = (-q.B + droot) / (2.0 * q.A);
    std::complex<double> r2 = (-q.B - droot) / (2.0 * q.A);
    double d1 = std::abs(up - r1), d2 = std::abs(up - r2);
    if (d1 < 0.25 * d2) return r1;
    if (d2 < 0.25 * d1) return r2;
    eps *= 0.1;  // roots too close to distinguish; tighten the nudge
  }
  throw NumericError("periodic_m: could not resolve the branch near a band edge");
}

double m_weight(const PeriodicJacobi& j0, double x) {
  std::complex<double> m = periodic_m(j0, x);
  return m.imag() / M_PI;
}

double PointMeasure::moment(int k) const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * std::pow(points[i], k);
  return s;
}

PointMeasure zero_measure(const JacobiSeq& seq, int n) {
  seq.validate();
  if (seq.two_sided) throw InputError("zero_measure: one-sided window required");
  if (n < 1 || n > static_cast<int>(seq.b.size()))
    throw InputError("zero_measure: n exceeds window length");
  Matrix j(n, n);
  for (int i = 0; i < n; ++i) j(i, i) = seq.b[i];
  for (int i = 0; i + 1 < n; ++i) {
    j(i, i + 1) = seq.a[i];
    j(i + 1, i) = seq.a[i];
  }
  auto eig = herm_eigen(j, false);
  PointMeasure out;
  out.points = eig.values;
  out.weights.assign(n, 1.0 / n);
  return out;
}

std::vector<double> orthonormal_polys(const JacobiSeq& seq, int n, double x) {
  // x p_k = a_{k+1} p_{k+1} + b_{k+1} p_k + a_k p_{k-1}, p_0 = 1.
  std::vector<double> p(n + 1);
  p[0] = 1.0;
  if (n >= 1) p[1] = (x - seq.b_at(1)) / seq.a_at(1);
  for (int k = 1; k < n; ++k)
    p[k + 1] = ((x - seq.b_at(k + 1)) * p[k] - seq.a_at(k) * p[k - 1]) / seq.a_at(k + 1);
  return p;
}

}  // namespace perispec
