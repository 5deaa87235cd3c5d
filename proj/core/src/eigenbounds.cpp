// SPDX-License-Identifier: Apache-2.0

#include "perispec/eigenbounds.hpp"

#include <algorithm>
#include <cmath>

#include "perispec/errors.hpp"

namespace perispec {

std::vector<double> comparison_b(const BlockJacobi& j, int sign) {
  if (sign != 1 && sign != -1) throw InputError("comparison_b: sign must be +-1");
  const int n = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size())) + 1;
  std::vector<double> b(n);
  Matrix id = Matrix::identity(j.l);
  for (int k = 1; k <= n; ++k) {
    double v = operator_norm(j.B_at(k)) + operator_norm(j.A_at(k) - id);
    if (k > 1) v += operator_norm(j.A_at(k - 1) - id);
    b[k - 1] = sign * v;
  }
  return b;
}

namespace {

// Truncation of the l-fold direct sum of the scalar comparison operator,
// written in the interleaved block basis: diagonal blocks b_n * 1, couplings 1.
Matrix comparison_truncation(const std::vector<double>& b, int l, int n_blocks) {
  const int n = l * n_blocks;
  Matrix m(n, n);
  for (int q = 0; q < n_blocks; ++q) {
    double bq = q < static_cast<int>(b.size()) ? b[q] : 0.0;
    for (int i = 0; i < l; ++i) m(q * l + i, q * l + i) = bq;
    if (q + 1 < n_blocks)
      for (int i = 0; i < l; ++i) {
        m(q * l + i, (q + 1) * l + i) = 1.0;
        m((q + 1) * l + i, q * l + i) = 1.0;
      }
  }
  return m;
}

std::vector<double> outside_band(const std::vector<double>& eigs, double slack = 0.0) {
  std::vector<double> out;
  for (double e : eigs)
    if (std::abs(e) > 2.0 + slack) out.push_back(e);
  return out;
}

}  // namespace

SandwichMargins sandwich_check(const BlockJacobi& j, int n_blocks) {
  j.validate();
  Matrix t = j.truncation(n_blocks);
  Matrix plus = comparison_truncation(comparison_b(j, +1), j.l, n_blocks);
  Matrix minus = comparison_truncation(comparison_b(j, -1), j.l, n_blocks);
  SandwichMargins m;
  m.upper = herm_eigen(plus - t, false).values.front();
  m.lower = herm_eigen(t - minus, false).values.front();
  return m;
}

EigenOrder eigen_order_check(const BlockJacobi& j, int n_blocks, double slack) {
  j.validate();
  EigenOrder out;
  auto ev_j = herm_eigen(j.truncation(n_blocks), false).values;
  auto ev_p = herm_eigen(comparison_truncation(comparison_b(j, +1), j.l, n_blocks), false).values;
  auto ev_m = herm_eigen(comparison_truncation(comparison_b(j, -1), j.l, n_blocks), false).values;

  auto plus_j = outside_band(ev_j);
  std::erase_if(plus_j, [](double e) { return e < 0; });
  std::sort(plus_j.rbegin(), plus_j.rend());
  auto plus_b = outside_band(ev_p);
  std::erase_if(plus_b, [](double e) { return e < 0; });
  std::sort(plus_b.rbegin(), plus_b.rend());

  auto minus_j = outside_band(ev_j);
  std::erase_if(minus_j, [](double e) { return e > 0; });
  std::sort(minus_j.begin(), minus_j.end());
  auto minus_b = outside_band(ev_m);
  std::erase_if(minus_b, [](double e) { return e > 0; });
  std::sort(minus_b.begin(), minus_b.end());

  out.outer_plus = plus_j;
  out.outer_minus = minus_j;
  out.bound_plus = plus_b;
  out.bound_minus = minus_b;
  for (std::size_t k = 0; k < plus_j.size(); ++k) {
    double bound = k < plus_b.size() ? std::abs(plus_b[k]) : 2.0;
    if (std::abs(plus_j[k]) > bound + slack) out.ordered = false;
  }
  for (std::size_t k = 0; k < minus_j.size(); ++k) {
    double bound = k < minus_b.size() ? std::abs(minus_b[k]) : 2.0;
    if (std::abs(minus_j[k]) > bound + slack) out.ordered = false;
  }
  return out;
}

HtBound ht_bound(const BlockJacobi& j) {
  j.validate();
  HtBound out;
  Matrix id = Matrix::identity(j.l);
  const int stored = std::max<int>(j.stored_blocks(), static_cast<int>(j.A.size()));
  double sum_b = 0.0, sum_a = 0.0;
  for (int k = 1; k <= stored; ++k) {
    sum_b += operator_norm(j.B_at(k));
    sum_a += operator_norm(j.A_at(k) - id);
  }
  out.rhs = 2.0 * j.l * sum_b + 4.0 * j.l * sum_a;

  // Truncation eigenvalues leak into |E| > 2 transiently; doubling the size
  // until the half-moment stabilizes filters them out.
  double prev = -1.0;
  int n_blocks = std::max(stored + 8, 16);
  for (int iter = 0; iter < 8; ++iter) {
    auto evs = outside_band(herm_eigen(j.truncation(n_blocks), false).values, 1e-11);
    double s = 0.0;
    for (double e : evs) s += std::sqrt(e * e - 4.0);
    if (prev >= 0.0 && std::abs(s - prev) <= 1e-6 * std::max(1.0, s)) {
      out.lhs = s;
      out.blocks_used = n_blocks;
      return out;
    }
    prev = s;
    n_blocks *= 2;
  }
  throw NumericError("ht_bound: eigenvalue half-moment did not stabilize");
}

}  // namespace perispec
