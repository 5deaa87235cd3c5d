// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_QUADRATURE_HPP
#define PERISPEC_QUADRATURE_HPP

#include <functional>

namespace perispec {

/// How to treat the endpoints of the integration interval.
enum class EndpointRule {
  none,       // integrand smooth up to the endpoints
  sqrt_lo,    // inverse-square-root behavior at the lower endpoint
  sqrt_hi,    // inverse-square-root behavior at the upper endpoint
  sqrt_both,  // both endpoints (arcsine-type weights)
};

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
/// Endpoint singularities of inverse-square-root type are removed by the
/// substitution x = mid + half*cos(t) (sqrt_both) or x = a + s^2 / b - s^2.
/// Raises NumericError with the achieved estimate in the message if the
/// subdivision budget runs out.
double quad_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                     EndpointRule rule = EndpointRule::none);

}  // namespace perispec

#endif
