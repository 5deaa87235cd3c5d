// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_SUMRULES_HPP
#define PERISPEC_SUMRULES_HPP

#include <complex>
#include <functional>
#include <vector>

#include "perispec/blockjacobi.hpp"
#include "perispec/jacobi.hpp"

namespace perispec {

/// Eigenvalue functional of the quadratic sum rule: with beta + 1/beta = E,
/// |beta| > 1,   F(E) = (beta^2 - beta^{-2})/4 - log|beta|.
/// Positive off [-2,2], ~ (2/3) dist(E, [-2,2])^{3/2} at the edges.
double F_of_E(double e);

/// G(a) = a^2 - 1 - log(a^2); >= 0 with equality iff a = 1.
double G_of_a(double a);

/// Blaschke factor b(z, a) for a in (-1,1): (a-z)/(1-az) for a > 0,
/// (z-a)/(1-az) for a <= 0; |b| = 1 on the unit circle, b(0, a) = |a|.
std::complex<double> blaschke_factor(std::complex<double> z, double a);

/// Alternating product of Blaschke factors over zeros and poles with modulus
/// below r_cut.
std::complex<double> blaschke_B(std::complex<double> z, const std::vector<double>& zeros,
                                const std::vector<double>& poles, double r_cut = 1.0);

struct SumRuleReport {
  double boundary_integral = 0.0;  // entropy-type boundary term
  double eigenvalue_sum = 0.0;     // sum of F over eigenvalues outside [-2,2]
  double coefficient_sum = 0.0;    // sum over blocks of Tr(B^2/4 + G(|A|)/2)
  double lhs = 0.0;                // boundary_integral + eigenvalue_sum
  double rhs = 0.0;                // coefficient_sum
  double residual = 0.0;
  double quad_tol = 0.0;
};

/// Both sides of the quadratic (P2-type) sum rule for a free-tail block
/// Jacobi operator.
SumRuleReport p2_sides(const BlockJacobi& j, double quad_tol = 1e-9);

struct C0Terms {
  double Z = 0.0;   // boundary entropy integral
  double E0 = 0.0;  // sum of log|beta_j|
  double A0 = 0.0;  // -sum log det|A_n|
  double residual = 0.0;  // Z - A0 - E0
};

C0Terms c0_terms(const BlockJacobi& j, double quad_tol = 1e-9);

struct StepRuleResiduals {
  double c0 = 0.0;
  double c1 = 0.0;
  double p2 = 0.0;
};

/// Residuals of the three step-by-step sum rules (one block stripped).
StepRuleResiduals step_sum_rules(const BlockJacobi& j, double quad_tol = 1e-9);

struct NonlocalCheck {
  double max_residual = 0.0;
  int skipped = 0;  // samples within 1e-4 of a pole or zero
  std::vector<double> arg_b_samples;  // arg B at the checked samples
};

/// Max modulus of lhs - rhs of the nonlocal step-by-step identity
///   det(|A_1| M(z)/z) = B(z) exp( int (e^it + z)/(e^it - z)
///                                 log[det Im M / det Im M^(1)] dt/(4 pi) )
/// over the given z samples in the open disk.
NonlocalCheck nonlocal_check(const BlockJacobi& j, const std::vector<std::complex<double>>& zs,
                             double quad_tol = 1e-9);

struct DetWCheck {
  double lhs = 0.0;  // det of the p x p boundary weight built entrywise
  double rhs = 0.0;  // Vandermonde product form
  std::vector<double> preimages;
};

/// Determinant identity for the a.c. weight of Delta(J) at E in (-2,2):
/// entrywise W from the orthonormal polynomials of J at the p preimages of E
/// against the product formula.  Here J is taken equal to J0.
DetWCheck detw_check(const PeriodicJacobi& j0, const std::function<double(double)>& omega,
                     double e);

struct WeightTransform {
  double lhs = 0.0;
  double rhs = 0.0;
  bool lhs_finite = true;
  bool rhs_finite = true;
};

/// Compares int (4-E^2)^alpha |log det W(E)| dE with
/// int dist(x, R \ sigma)^alpha |log omega(x)| dx after E = Delta(x); the two
/// are finite together.  Divergent integrals are flagged infinite.
WeightTransform weight_transform_check(const PeriodicJacobi& j0,
                                       const std::function<double(double)>& omega, double alpha,
                                       double quad_tol = 1e-6);

}  // namespace perispec

#endif
