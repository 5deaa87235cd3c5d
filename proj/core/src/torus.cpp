// SPDX-License-Identifier: Apache-2.0

#include "perispec/torus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "perispec/errors.hpp"
#include "perispec/linalg.hpp"

namespace perispec {

namespace {
constexpr int kTailCut = 40;  // e^{-40} ~ 4e-18, below double precision here
}

double d_m(const JacobiSeq& x, const JacobiSeq& y, long m) {
  double s = 0.0, w = 1.0;
  const double decay = std::exp(-1.0);
  for (int k = 0; k < kTailCut; ++k, w *= decay) {
    long n = m + k;
    if (n > x.hi() || n > y.hi()) break;
    s += w * (std::abs(x.a_at(n) - y.a_at(n)) + std::abs(x.b_at(n) - y.b_at(n)));
  }
  return s;
}

double d_m(const JacobiSeq& x, const PeriodicJacobi& y, long m) {
  double s = 0.0, w = 1.0;
  const double decay = std::exp(-1.0);
  for (int k = 0; k < kTailCut; ++k, w *= decay) {
    long n = m + k;
    if (n > x.hi()) break;
    s += w * (std::abs(x.a_at(n) - y.a_at(n)) + std::abs(x.b_at(n) - y.b_at(n)));
  }
  return s;
}

double d_m(const VerblunskySeq& x, const VerblunskySeq& y, long m) {
  double s = 0.0, w = 1.0;
  const double decay = std::exp(-1.0);
  for (int k = 0; k < kTailCut; ++k, w *= decay) {
    long n = m + k;
    if (n > x.hi() || n > y.hi()) break;
    s += w * std::abs(x.alpha_at(n) - y.alpha_at(n));
  }
  return s;
}

double d_m(const VerblunskySeq& x, const PeriodicVerblunsky& y, long m) {
  double s = 0.0, w = 1.0;
  const double decay = std::exp(-1.0);
  for (int k = 0; k < kTailCut; ++k, w *= decay) {
    long n = m + k;
    if (n > x.hi()) break;
    s += w * std::abs(x.alpha_at(n) - y.alpha_at(n));
  }
  return s;
}

double tilde_d_m(const JacobiSeq& x, const JacobiSeq& y, long m, int p) {
  double s = 0.0;
  for (int k = 0; k <= p - 1; ++k)
    s += std::abs(x.a_at(m + k) - y.a_at(m + k)) + std::abs(x.b_at(m + k) - y.b_at(m + k));
  return s;
}

double tilde_d_m(const JacobiSeq& x, const PeriodicJacobi& y, long m) {
  double s = 0.0;
  for (int k = 0; k <= y.period() - 1; ++k)
    s += std::abs(x.a_at(m + k) - y.a_at(m + k)) + std::abs(x.b_at(m + k) - y.b_at(m + k));
  return s;
}

double tilde_d_m(const VerblunskySeq& x, const VerblunskySeq& y, long m, int p) {
  double s = 0.0;
  for (int k = 0; k <= p; ++k) s += std::abs(x.alpha_at(m + k) - y.alpha_at(m + k));
  return s;
}

double tilde_d_m(const VerblunskySeq& x, const PeriodicVerblunsky& y, long m) {
  double s = 0.0;
  for (int k = 0; k <= y.period(); ++k) s += std::abs(x.alpha_at(m + k) - y.alpha_at(m + k));
  return s;
}

double dist_to_sample(const JacobiSeq& x, const TorusSample& s, long m) {
  if (s.points.empty()) throw InputError("dist_to_sample: empty sample");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pt : s.points)
    for (int k = 0; k < pt.period(); ++k) best = std::min(best, d_m(x, pt.shifted(k), m));
  return best;
}

double coeff_mismatch(const PeriodicJacobi& block, const PeriodicJacobi& j0) {
  if (block.period() != j0.period())
    throw InputError("coeff_mismatch: period mismatch");
  Discriminant d = discriminant_oprl(block);
  Discriminant d0 = discriminant_oprl(j0);
  double s = 0.0;
  for (int k = 0; k <= j0.period(); ++k) {
    double diff = d.poly.coeff(k) - d0.poly.coeff(k);
    s += diff * diff;
  }
  return std::sqrt(s);
}

double coeff_mismatch(const PeriodicVerblunsky& block, const PeriodicVerblunsky& v0) {
  if (block.period() != v0.period())
    throw InputError("coeff_mismatch: period mismatch");
  LaurentPoly d = discriminant_opuc(block);
  LaurentPoly d0 = discriminant_opuc(v0);
  double s = 0.0;
  for (int k = -v0.period() / 2; k <= v0.period() / 2; ++k) s += std::norm(d.coeff(k) - d0.coeff(k));
  return std::sqrt(s);
}

std::vector<std::vector<double>> discriminant_jacobian(const PeriodicJacobi& j) {
  // Differentiate the transfer product T = L_p ... L_1 factor by factor:
  // dT/dq = L_p ... dL_k/dq ... L_1.
  const int p = j.period();
  auto factor = [&](int k) {
    const double a = j.a[k], b = j.b[k];
    std::array<RealPoly, 4> l;
    l[0] = (RealPoly::x() - b) * (1.0 / a);
    l[1] = RealPoly::constant(-1.0 / a);
    l[2] = RealPoly::constant(a);
    l[3] = RealPoly();
    return l;
  };
  auto da_factor = [&](int k) {
    const double a = j.a[k], b = j.b[k];
    std::array<RealPoly, 4> l;
    l[0] = (RealPoly::x() - b) * (-1.0 / (a * a));
    l[1] = RealPoly::constant(1.0 / (a * a));
    l[2] = RealPoly::constant(1.0);
    l[3] = RealPoly();
    return l;
  };
  auto db_factor = [&](int k) {
    const double a = j.a[k];
    std::array<RealPoly, 4> l;
    l[0] = RealPoly::constant(-1.0 / a);
    l[1] = RealPoly();
    l[2] = RealPoly();
    l[3] = RealPoly();
    return l;
  };
  auto mul = [](const std::array<RealPoly, 4>& x, const std::array<RealPoly, 4>& y) {
    std::array<RealPoly, 4> r;
    r[0] = x[0] * y[0] + x[1] * y[2];
    r[1] = x[0] * y[1] + x[1] * y[3];
    r[2] = x[2] * y[0] + x[3] * y[2];
    r[3] = x[2] * y[1] + x[3] * y[3];
    return r;
  };

  // Prefix products R_k = L_k ... L_1 and suffix products S_k = L_p ... L_k.
  std::vector<std::array<RealPoly, 4>> pre(p + 1), suf(p + 2);
  pre[0] = {RealPoly::constant(1.0), RealPoly(), RealPoly(), RealPoly::constant(1.0)};
  for (int k = 1; k <= p; ++k) pre[k] = mul(factor(k - 1), pre[k - 1]);
  suf[p + 1] = pre[0];
  for (int k = p; k >= 1; --k) suf[k] = mul(suf[k + 1], factor(k - 1));

  std::vector<std::vector<double>> jac(p + 1, std::vector<double>(2 * p, 0.0));
  for (int k = 1; k <= p; ++k) {
    for (int which = 0; which < 2; ++which) {
      auto mid = which == 0 ? da_factor(k - 1) : db_factor(k - 1);
      auto t = mul(suf[k + 1], mul(mid, pre[k - 1]));
      RealPoly dtrace = t[0] + t[3];
      int col = which == 0 ? (k - 1) : (p + k - 1);
      for (int c = 0; c <= p; ++c) jac[c][col] = dtrace.coeff(c);
    }
  }
  return jac;
}

void toda_velocity(const PeriodicJacobi& j, std::vector<double>& da, std::vector<double>& db) {
  const int p = j.period();
  da.resize(p);
  db.resize(p);
  for (int n = 0; n < p; ++n) {
    double b_next = j.b[(n + 1) % p];
    double a_prev = j.a[(n + p - 1) % p];
    da[n] = j.a[n] * (b_next - j.b[n]);
    db[n] = 2.0 * (j.a[n] * j.a[n] - a_prev * a_prev);
  }
}

TorusSample toda_sample(const PeriodicJacobi& j0, const std::vector<double>& times, double dt,
                        double drift_tol) {
  j0.validate();
  if (!(dt > 0)) throw InputError("toda_sample: dt must be positive");
  const int p = j0.period();
  Discriminant d0 = discriminant_oprl(j0);
  const double scale = std::max(d0.poly.scale(), 1.0);

  TorusSample out;
  out.reference = j0;

  std::vector<double> ts = times;
  std::sort(ts.begin(), ts.end());
  if (!ts.empty() && ts.front() < 0.0) throw InputError("toda_sample: times must be nonnegative");

  PeriodicJacobi cur = j0;
  double t = 0.0;
  auto rk4_step = [&](PeriodicJacobi& state, double h) {
    std::vector<double> k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    toda_velocity(state, k1a, k1b);
    PeriodicJacobi tmp = state;
    for (int i = 0; i < p; ++i) {
      tmp.a[i] = state.a[i] + 0.5 * h * k1a[i];
      tmp.b[i] = state.b[i] + 0.5 * h * k1b[i];
    }
    toda_velocity(tmp, k2a, k2b);
    for (int i = 0; i < p; ++i) {
      tmp.a[i] = state.a[i] + 0.5 * h * k2a[i];
      tmp.b[i] = state.b[i] + 0.5 * h * k2b[i];
    }
    toda_velocity(tmp, k3a, k3b);
    for (int i = 0; i < p; ++i) {
      tmp.a[i] = state.a[i] + h * k3a[i];
      tmp.b[i] = state.b[i] + h * k3b[i];
    }
    toda_velocity(tmp, k4a, k4b);
    for (int i = 0; i < p; ++i) {
      state.a[i] += h / 6.0 * (k1a[i] + 2.0 * k2a[i] + 2.0 * k3a[i] + k4a[i]);
      state.b[i] += h / 6.0 * (k1b[i] + 2.0 * k2b[i] + 2.0 * k3b[i] + k4b[i]);
    }
  };

  for (double target : ts) {
    while (t < target - 1e-12) {
      double h = std::min(dt, target - t);
      rk4_step(cur, h);
      t += h;
      for (double v : cur.a)
        if (!(v > 0.0) || !std::isfinite(v))
          throw NumericError("toda_sample: flow left the positive cone near t = " +
                             std::to_string(t) + "; reduce dt");
    }
    Discriminant d = discriminant_oprl(cur);
    double drift = 0.0;
    for (int k = 0; k <= p; ++k) drift = std::max(drift, std::abs(d.poly.coeff(k) - d0.poly.coeff(k)));
    if (drift > drift_tol * scale)
      throw NumericError("toda_sample: discriminant drift " + std::to_string(drift) +
                         " exceeds tolerance; reduce dt");
    out.points.push_back(cur);
    out.times.push_back(t);
  }
  return out;
}

ProjectionResult project_to_torus(const PeriodicJacobi& block, const PeriodicJacobi& j0,
                                  double tol) {
  if (block.period() != j0.period()) throw InputError("project_to_torus: period mismatch");
  const int p = j0.period();
  Discriminant d0 = discriminant_oprl(j0);
  const double scale = std::max(d0.poly.scale(), 1.0);

  PeriodicJacobi cur = block;
  double lambda = 1e-6;
  ProjectionResult res;
  for (int it = 0; it < 100; ++it) {
    Discriminant d = discriminant_oprl(cur);
    std::vector<double> f(p + 1);
    double fn = 0.0;
    for (int k = 0; k <= p; ++k) {
      f[k] = d.poly.coeff(k) - d0.poly.coeff(k);
      fn += f[k] * f[k];
    }
    fn = std::sqrt(fn);
    res.iterations = it;
    res.mismatch = fn;
    if (fn <= tol * scale) {
      res.point = cur;
      double dist = 0.0;
      for (int i = 0; i < p; ++i) {
        dist += (cur.a[i] - block.a[i]) * (cur.a[i] - block.a[i]);
        dist += (cur.b[i] - block.b[i]) * (cur.b[i] - block.b[i]);
      }
      res.distance = std::sqrt(dist);
      return res;
    }

    // Minimum-norm Levenberg-Marquardt step: x <- x - J^T (J J^T + lambda)^{-1} f
    auto jac = discriminant_jacobian(cur);
    const int rows = p + 1, cols = 2 * p;
    Matrix jjt(rows, rows), rhs(rows, 1);
    for (int r = 0; r < rows; ++r) {
      rhs(r, 0) = f[r];
      for (int c = 0; c < rows; ++c) {
        double s = 0.0;
        for (int k = 0; k < cols; ++k) s += jac[r][k] * jac[c][k];
        jjt(r, c) = s;
      }
      jjt(r, r) += lambda;
    }
    Matrix y = solve(jjt, rhs);
    PeriodicJacobi next = cur;
    for (int c = 0; c < cols; ++c) {
      double step = 0.0;
      for (int r = 0; r < rows; ++r) step += jac[r][c] * y(r, 0).real();
      if (c < p) next.a[c] -= step;
      else next.b[c - p] -= step;
    }
    bool ok = true;
    for (double v : next.a)
      if (!(v > 0.0)) ok = false;
    double fn_next = ok ? coeff_mismatch(next, j0) : std::numeric_limits<double>::infinity();
    if (fn_next < fn) {
      cur = next;
      lambda = std::max(lambda * 0.3, 1e-12);
    } else {
      lambda *= 10.0;
      if (lambda > 1e8)
        throw NumericError("project_to_torus: diverged, residual " + std::to_string(fn));
    }
  }
  throw NumericError("project_to_torus: no convergence, residual " + std::to_string(res.mismatch));
}

}  // namespace perispec
