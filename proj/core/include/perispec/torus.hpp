// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_TORUS_HPP
#define PERISPEC_TORUS_HPP

#include <complex>
#include <vector>

#include "perispec/cmv.hpp"
#include "perispec/jacobi.hpp"

namespace perispec {

/// Exponentially weighted coefficient metric
///   d_m = sum_k e^{-k} (|a_{m+k}-a'_{m+k}| + |b_{m+k}-b'_{m+k}|),
/// truncated at k = 39 (e^{-40} is below double precision relative to the
/// bounded coefficients here).  Both windows must cover [m, m+39] or be
/// periodic extensions.
double d_m(const JacobiSeq& x, const JacobiSeq& y, long m);
double d_m(const VerblunskySeq& x, const VerblunskySeq& y, long m);
double d_m(const JacobiSeq& x, const PeriodicJacobi& y, long m);
double d_m(const VerblunskySeq& x, const PeriodicVerblunsky& y, long m);

/// Finite window metric: OPRL sums k = 0..p-1, OPUC k = 0..p.
double tilde_d_m(const JacobiSeq& x, const JacobiSeq& y, long m, int p);
double tilde_d_m(const VerblunskySeq& x, const VerblunskySeq& y, long m, int p);
double tilde_d_m(const JacobiSeq& x, const PeriodicJacobi& y, long m);
double tilde_d_m(const VerblunskySeq& x, const PeriodicVerblunsky& y, long m);

struct TorusSample {
  PeriodicJacobi reference;
  std::vector<PeriodicJacobi> points;
  std::vector<double> times;
};

/// min over sample points and their p cyclic shifts of d_m(x, point).
/// An upper bound for the distance to the full torus.
double dist_to_sample(const JacobiSeq& x, const TorusSample& s, long m);

/// Euclidean norm of the difference of discriminant coefficient vectors;
/// comparable (two-sided) to the distance from the isospectral torus near it.
double coeff_mismatch(const PeriodicJacobi& block, const PeriodicJacobi& j0);
double coeff_mismatch(const PeriodicVerblunsky& block, const PeriodicVerblunsky& v0);

/// Jacobian of the coefficient map F(a_1..a_p, b_1..b_p) = coeffs(Delta),
/// rows = p+1 coefficients (degree 0 first), cols = (a_1..a_p, b_1..b_p).
std::vector<std::vector<double>> discriminant_jacobian(const PeriodicJacobi& j);

/// Right-hand side of the isospectral flow
///   a_n' = a_n (b_{n+1} - b_n),  b_n' = 2 (a_n^2 - a_{n-1}^2)
/// with periodic indices; conserves the discriminant.
void toda_velocity(const PeriodicJacobi& j, std::vector<double>& da, std::vector<double>& db);

/// RK4 trajectory of the periodic Toda system sampled at the given times.
/// Raises NumericError if any sample's discriminant coefficients drift more
/// than drift_tol (relative) from the initial ones.
TorusSample toda_sample(const PeriodicJacobi& j0, const std::vector<double>& times, double dt,
                        double drift_tol = 1e-8);

struct ProjectionResult {
  PeriodicJacobi point;
  double distance = 0.0;  // Euclidean distance moved in (a, b)
  double mismatch = 0.0;  // remaining coefficient mismatch
  int iterations = 0;
};

/// Levenberg-Marquardt minimum-norm projection onto the set
/// {Delta_J = Delta_{J0}}.  Converges locally; raises NumericError with the
/// last iterate and residual in the message otherwise.
ProjectionResult project_to_torus(const PeriodicJacobi& block, const PeriodicJacobi& j0,
                                  double tol = 1e-12);

}  // namespace perispec

#endif
