// SPDX-License-Identifier: Apache-2.0

#include "perispec/blockjacobi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perispec/errors.hpp"

namespace perispec {

Matrix BlockJacobi::A_at(int n) const {
  if (n < 1) throw InputError("BlockJacobi: block index is 1-based");
  if (n <= static_cast<int>(A.size())) return A[n - 1];
  if (!free_tail) throw InputError("BlockJacobi: A block beyond stored range");
  return Matrix::identity(l);
}

Matrix BlockJacobi::B_at(int n) const {
  if (n < 1) throw InputError("BlockJacobi: block index is 1-based");
  if (n <= static_cast<int>(B.size())) return B[n - 1];
  if (!free_tail) throw InputError("BlockJacobi: B block beyond stored range");
  return Matrix::zero(l, l);
}

BlockJacobi BlockJacobi::stripped(int count) const {
  BlockJacobi r;
  r.l = l;
  r.free_tail = free_tail;
  for (int n = count + 1; n <= stored_blocks(); ++n) r.B.push_back(B[n - 1]);
  for (int n = count + 1; n <= static_cast<int>(A.size()); ++n) r.A.push_back(A[n - 1]);
  return r;
}

Matrix BlockJacobi::truncation(int n_blocks) const {
  const int n = n_blocks * l;
  Matrix m(n, n);
  for (int q = 1; q <= n_blocks; ++q) {
    Matrix b = B_at(q);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) m((q - 1) * l + i, (q - 1) * l + j) = b(i, j);
    if (q < n_blocks) {
      Matrix a = A_at(q);
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
          m((q - 1) * l + i, q * l + j) = a(i, j);
          m(q * l + j, (q - 1) * l + i) = std::conj(a(i, j));
        }
    }
  }
  return m;
}

void BlockJacobi::validate() const {
  if (l < 1) throw InputError("BlockJacobi: l must be >= 1");
  if (A.size() + 1 < B.size() || A.size() > B.size() + 1)
    throw InputError("BlockJacobi: stored A/B counts inconsistent");
  for (const auto& b : B) {
    if (b.rows() != l || b.cols() != l) throw InputError("BlockJacobi: B block size mismatch");
    if (b.hermiticity_defect() > 1e-12) throw InputError("BlockJacobi: B block not Hermitian");
  }
  for (const auto& a : A) {
    if (a.rows() != l || a.cols() != l) throw InputError("BlockJacobi: A block size mismatch");
    auto sv = singular_values(a);
    if (sv.empty() || !(sv.back() > 1e-12 * std::max(sv.front(), 1.0)))
      throw InputError("BlockJacobi: A block numerically singular");
  }
}

BlockJacobi BlockJacobi::scalar(std::vector<double> a, std::vector<double> b, bool free_tail) {
  BlockJacobi j;
  j.l = 1;
  j.free_tail = free_tail;
  for (double v : b) {
    Matrix m(1, 1);
    m(0, 0) = v;
    j.B.push_back(m);
  }
  for (double v : a) {
    Matrix m(1, 1);
    m(0, 0) = v;
    j.A.push_back(m);
  }
  return j;
}

TypeFlags classify_type(const BlockJacobi& j, double tol) {
  TypeFlags f;
  f.type1 = f.type2 = f.type3 = true;
  Matrix prod = Matrix::identity(j.l);
  const int n = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size()));
  for (int k = 1; k <= n; ++k) {
    Matrix a = j.A_at(k);
    Matrix sym = (a + a.adjoint()) * 0.5;
    if (a.hermiticity_defect() > tol || herm_eigen(sym, false).values.front() <= 0.0)
      f.type1 = false;
    prod = prod * a;
    Matrix psym = (prod + prod.adjoint()) * 0.5;
    if (prod.hermiticity_defect() > tol || herm_eigen(psym, false).values.front() <= 0.0)
      f.type2 = false;
    if (!is_lower_triangular_positive(a, tol)) f.type3 = false;
    if (!f.type1 && !f.type2 && !f.type3) break;
  }
  return f;
}

std::pair<Matrix, Matrix> abs_and_cholesky(const Matrix& a) {
  Matrix abs_a = abs_of(a);
  const int n = a.rows();
  // Gram-Schmidt on the columns of |A| from right to left gives |A| = Q L
  // with Q unitary and L in the lower-triangular positive-diagonal class;
  // |L| = |A|.
  Matrix q(n, n), lt(n, n);
  for (int c = n - 1; c >= 0; --c) {
    std::vector<cdouble> v(n);
    for (int i = 0; i < n; ++i) v[i] = abs_a(i, c);
    for (int d = n - 1; d > c; --d) {
      cdouble proj = 0.0;
      for (int i = 0; i < n; ++i) proj += std::conj(q(i, d)) * abs_a(i, c);
      lt(d, c) = proj;
      for (int i = 0; i < n; ++i) v[i] -= proj * q(i, d);
    }
    double nrm = 0.0;
    for (const auto& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) throw NumericError("abs_and_cholesky: numerically singular input");
    lt(c, c) = nrm;
    for (int i = 0; i < n; ++i) q(i, c) = v[i] / nrm;
  }
  return {abs_a, lt};
}

BlockJacobi to_type(const BlockJacobi& j, int target) {
  j.validate();
  if (target < 1 || target > 3) throw InputError("to_type: target must be 1, 2 or 3");
  BlockJacobi out;
  out.l = j.l;
  out.free_tail = j.free_tail;
  const int nb = j.stored_blocks();
  const int na = static_cast<int>(j.A.size());
  // One extra block keeps the tail consistent when A_n != 1 at the boundary.
  Matrix u = Matrix::identity(j.l);  // U_n, starting from U_1 = 1
  Matrix prod = Matrix::identity(j.l);
  for (int n = 1; n <= std::max(nb, na); ++n) {
    Matrix bn = j.B_at(n);
    Matrix an = j.A_at(n);
    Matrix b_new = u * bn * u.adjoint();
    Matrix ua = u * an;
    Matrix u_next;
    Matrix a_new;
    if (target == 1) {
      // polar decomposition U A = H W: A_new = H, U_{n+1} = W
      Matrix h = abs_of(ua.adjoint());  // sqrt((UA)(UA)^dagger)
      Matrix w = solve(h, ua);
      a_new = h;
      u_next = w;
    } else if (target == 2) {
      // U_{n+1} from the polar decomposition of the partial product
      // P = A_1...A_n = H W; then tilde A_1 ... tilde A_n = P W^dagger = H > 0.
      prod = prod * an;
      Matrix h = abs_of(prod.adjoint());  // sqrt(P P^dagger)
      Matrix w = solve(h, prod);
      a_new = ua * w.adjoint();
      u_next = w;
    } else {
      // LQ decomposition of U A: lower-triangular times unitary.
      // (UA)^dagger = Q R with R upper triangular positive diagonal
      // => UA = R^dagger Q^dagger, L = R^dagger, U_{n+1} = Q^dagger.
      Matrix m = ua.adjoint();
      const int dim = m.rows();
      Matrix qm(dim, dim), rm(dim, dim);
      for (int c = 0; c < dim; ++c) {
        std::vector<cdouble> v(dim);
        for (int i = 0; i < dim; ++i) v[i] = m(i, c);
        for (int d = 0; d < c; ++d) {
          cdouble proj = 0.0;
          for (int i = 0; i < dim; ++i) proj += std::conj(qm(i, d)) * m(i, c);
          rm(d, c) = proj;
          for (int i = 0; i < dim; ++i) v[i] -= proj * qm(i, d);
        }
        double nrm = 0.0;
        for (const auto& x : v) nrm += std::norm(x);
        nrm = std::sqrt(nrm);
        if (!(nrm > 0.0)) throw InputError("to_type: singular A block");
        rm(c, c) = nrm;
        for (int i = 0; i < dim; ++i) qm(i, c) = v[i] / nrm;
      }
      a_new = rm.adjoint();
      u_next = qm.adjoint();
    }
    if (n <= nb) out.B.push_back(b_new);
    if (n <= na) out.A.push_back(a_new);
    u = u_next;
  }
  return out;
}

NevaiDiagnostic nevai_diagnostic(const BlockJacobi& j) {
  NevaiDiagnostic d;
  const int stored = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size()));
  const int n = j.free_tail ? stored + 1 : stored;
  std::vector<double> bn(n + 1, 0.0), ata(n + 1, 0.0), an(n + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    bn[k] = operator_norm(j.B_at(k));
    Matrix a = j.A_at(k);
    ata[k] = operator_norm(a.adjoint() * a - Matrix::identity(j.l));
    an[k] = operator_norm(a - Matrix::identity(j.l));
  }
  for (int from = 1; from <= n; ++from) {
    double sb = 0, sata = 0, sa = 0;
    for (int k = from; k <= n; ++k) {
      sb = std::max(sb, bn[k]);
      sata = std::max(sata, ata[k]);
      sa = std::max(sa, an[k]);
    }
    d.from.push_back(from);
    d.b_tail.push_back(sb);
    d.ata_tail.push_back(sata);
    d.a_tail.push_back(sa);
  }
  return d;
}

Matrix m_disk(const BlockJacobi& j, std::complex<double> z) {
  // |z| = 1 is allowed: for eventually-free operators M is rational, so the
  // boundary value is the same algebraic expression.
  if (!(std::abs(z) > 0.0) || !(std::abs(z) < 1.0 + 1e-9))
    throw InputError("m_disk: z must satisfy 0 < |z| <= 1");
  if (!j.free_tail) throw InputError("m_disk: free tail required");
  const std::complex<double> e = z + 1.0 / z;
  const int n0 = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size()));
  // Exact free-tail value, then backward stripping:
  // M^{(n)}(z)^{-1} = E - B_{n+1} - A_{n+1} M^{(n+1)}(z) A_{n+1}^dagger.
  Matrix m = Matrix::identity(j.l) * z;
  for (int n = n0; n >= 1; --n) {
    Matrix a = j.A_at(n);
    Matrix inv = Matrix::identity(j.l) * e - j.B_at(n) - a * m * a.adjoint();
    cdouble det = determinant(inv);
    if (std::abs(det) < 1e-13 * std::pow(std::max(1.0, inv.max_abs()), j.l))
      throw NumericError("m_disk: pole encountered near z = " + std::to_string(z.real()) + "+" +
                         std::to_string(z.imag()) + "i at block " + std::to_string(n));
    m = inverse(inv);
  }
  return m;
}

Matrix m_function(const BlockJacobi& j, std::complex<double> e) {
  // z = (E - sqrt(E^2-4))/2 with the branch |z| < 1.
  std::complex<double> root = std::sqrt(e * e - 4.0);
  std::complex<double> z = 0.5 * (e - root);
  if (std::abs(z) > 1.0) z = 0.5 * (e + root);
  return m_disk(j, z) * cdouble(-1.0);
}

Matrix MatrixPointMeasure::stieltjes(std::complex<double> e) const {
  if (weights.empty()) throw InputError("MatrixPointMeasure: empty measure");
  Matrix s(weights.front().rows(), weights.front().cols());
  for (std::size_t k = 0; k < points.size(); ++k) s += weights[k] * (1.0 / (points[k] - e));
  return s;
}

MatrixPointMeasure truncation_measure(const BlockJacobi& j, int n_blocks) {
  if (n_blocks < 1) throw InputError("truncation_measure: need at least one block");
  Matrix t = j.truncation(n_blocks);
  auto eig = herm_eigen(t, true);
  MatrixPointMeasure out;
  const int l = j.l;
  out.points = eig.values;
  out.weights.reserve(eig.values.size());
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    Matrix w(l, l);
    for (int i = 0; i < l; ++i)
      for (int jj = 0; jj < l; ++jj)
        w(i, jj) = eig.vectors(i, static_cast<int>(k)) * std::conj(eig.vectors(jj, static_cast<int>(k)));
    out.weights.push_back(std::move(w));
  }
  return out;
}

namespace {

double log_abs_det_m(const BlockJacobi& j, std::complex<double> z) {
  return std::log(std::abs(determinant(m_disk(j, z))));
}

}  // namespace

std::vector<PoleInfo> poles_of_det_m(const BlockJacobi& j, double lo, double hi, int grid) {
  if (!(lo < hi) || lo < -1.0 || hi > 1.0) throw InputError("poles_of_det_m: bad interval");
  if (lo <= 0.0 && hi >= 0.0)
    throw InputError("poles_of_det_m: interval must exclude 0");
  if (std::min(std::abs(lo), std::abs(hi)) < 1e-6 || std::max(std::abs(lo), std::abs(hi)) > 1.0 - 1e-6)
    throw InputError("poles_of_det_m: interval must avoid 0 and +-1 by a margin");

  auto f = [&](double x) -> double {
    Matrix m = m_disk(j, {x, 0.0});
    cdouble d = determinant(m);
    return 1.0 / d.real();
  };
  auto absf = [&](double x) -> double {
    try {
      return std::abs(f(x));
    } catch (const NumericError&) {
      return 0.0;
    }
  };

  std::vector<double> xs(grid + 1), fs(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    xs[i] = lo + (hi - lo) * i / grid;
    try {
      fs[i] = f(xs[i]);
    } catch (const NumericError&) {
      fs[i] = 0.0;  // grid point on top of a pole
    }
  }

  struct Candidate {
    double x;
    bool from_sign_change;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < grid; ++i) {
    if (fs[i] == 0.0) {
      candidates.push_back({xs[i], true});
      continue;
    }
    if (fs[i] * fs[i + 1] < 0.0) {
      double a = xs[i], b = xs[i + 1];
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (a + b);
        double fm;
        try {
          fm = f(mid);
        } catch (const NumericError&) {
          a = b = mid;
          break;
        }
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fm > 0) == (fs[i] > 0)) a = mid; else b = mid;
      }
      candidates.push_back({0.5 * (a + b), true});
    } else if (i > 0 && std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) < std::abs(fs[i + 1]) &&
               std::abs(fs[i]) < 1e-2) {
      // local dip without sign change: possible even-order pole
      double a = xs[i - 1], b = xs[i + 1];
      for (int it = 0; it < 60; ++it) {
        double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
        if (absf(m1) < absf(m2)) b = m2; else a = m1;
      }
      double x0 = 0.5 * (a + b);
      if (absf(x0) < 1e-6) candidates.push_back({x0, false});
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& u, const Candidate& v) { return u.x < v.x; });
  const double sep = (hi - lo) / grid;
  std::vector<Candidate> merged;
  for (const auto& c : candidates) {
    if (!merged.empty() && std::abs(c.x - merged.back().x) < 2.0 * sep) {
      if (c.from_sign_change && merged.back().from_sign_change)
        throw NumericError("poles_of_det_m: adjacent sign changes, refine the grid");
      continue;  // a dip next to a located pole is the same pole
    }
    merged.push_back(c);
  }

  std::vector<PoleInfo> out;
  for (const auto& cand : merged) {
    double x0 = cand.x;
    // order from the circle average of log|det M|: mean over |z-x0| = r of
    // log|det M| ~ -q log r + c.
    std::vector<double> rs = {1e-3, 2e-3, 4e-3};
    std::vector<double> avg(rs.size(), 0.0);
    const int nphi = 16;
    for (std::size_t ri = 0; ri < rs.size(); ++ri) {
      double s = 0.0;
      for (int k = 0; k < nphi; ++k) {
        double phi = 2.0 * M_PI * (k + 0.5) / nphi;
        s += log_abs_det_m(j, {x0 + rs[ri] * std::cos(phi), rs[ri] * std::sin(phi)});
      }
      avg[ri] = s / nphi;
    }
    // least squares slope vs log r
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      mx += std::log(rs[i]);
      my += avg[i];
    }
    mx /= rs.size();
    my /= rs.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      num += (std::log(rs[i]) - mx) * (avg[i] - my);
      den += (std::log(rs[i]) - mx) * (std::log(rs[i]) - mx);
    }
    double slope = num / den;
    int order = static_cast<int>(std::lround(-slope));
    double resid = std::abs(-slope - order);
    if (order >= 1) out.push_back({x0, order, resid});
  }
  return out;
}

std::vector<double> eigenvalues_outside(const BlockJacobi& j) {
  // Row-sum bound on ||J|| caps the pole search: |E| <= bound means
  // |z| >= z_min with z_min + 1/z_min = bound.
  double bound = 2.0;
  const int n = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size())) + 1;
  for (int k = 1; k <= n; ++k)
    bound = std::max(bound, operator_norm(j.B_at(k)) + operator_norm(j.A_at(k)) +
                                (k > 1 ? operator_norm(j.A_at(k - 1)) : 0.0));
  bound += 1.0;
  double z_min = 0.5 * (bound - std::sqrt(bound * bound - 4.0));
  z_min = std::max(1e-4, 0.9 * z_min);

  std::vector<double> evs;
  for (double sign : {-1.0, 1.0}) {
    double lo = sign < 0 ? -0.999 : z_min;
    double hi = sign < 0 ? -z_min : 0.999;
    for (const auto& pole : poles_of_det_m(j, lo, hi))
      for (int k = 0; k < pole.order; ++k) evs.push_back(pole.z + 1.0 / pole.z);
  }
  std::sort(evs.begin(), evs.end());
  return evs;
}

}  // namespace perispec
