// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_EIGENBOUNDS_HPP
#define PERISPEC_EIGENBOUNDS_HPP

#include <vector>

#include "perispec/blockjacobi.hpp"
#include "perispec/jacobi.hpp"

namespace perispec {

/// Scalar comparison operator: a_n = 1 and
///   b_n^{+-} = +-(||B_n|| + ||A_{n-1}-1|| + ||A_n-1||)
/// (no A_0 term at n = 1).  Returns the b sequence over the stored blocks
/// plus one tail block.
std::vector<double> comparison_b(const BlockJacobi& j, int sign);

struct SandwichMargins {
  double upper = 0.0;  // min eigenvalue of (J_+^{(l)} - J) truncation
  double lower = 0.0;  // min eigenvalue of (J - J_-^{(l)}) truncation
};

/// Operator sandwich J_-^{(l)} <= J <= J_+^{(l)} on n-block truncations.
SandwichMargins sandwich_check(const BlockJacobi& j, int n_blocks);

struct EigenOrder {
  std::vector<double> outer_plus;    // eigenvalues > 2 of the truncated block operator
  std::vector<double> outer_minus;   // eigenvalues < -2
  std::vector<double> bound_plus;    // matching eigenvalues of J_+^{(l)}
  std::vector<double> bound_minus;   // matching eigenvalues of J_-^{(l)}
  bool ordered = true;               // |E_j^(J)| <= |E_j^(J_+-)| for all j, with slack
};

EigenOrder eigen_order_check(const BlockJacobi& j, int n_blocks, double slack = 1e-9);

struct HtBound {
  double lhs = 0.0;  // sum over eigenvalues outside [-2,2] of sqrt(E^2-4)
  double rhs = 0.0;  // 2 l sum ||B_n|| + 4 l sum ||A_n - 1||
  int blocks_used = 0;
};

/// Lieb-Thirring-type half-moment bound; truncation size doubles until the
/// lhs is stable to 1e-6.
HtBound ht_bound(const BlockJacobi& j);

}  // namespace perispec

#endif
