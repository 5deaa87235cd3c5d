// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_ERRORS_HPP
#define PERISPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace perispec {

/// Caller-supplied data is malformed: wrong sizes, parameters outside their
/// admissible set, inconsistent options.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematically valid object was evaluated outside its domain
/// (e.g. a band density at a gap point, a Laurent polynomial at z = 0).
class EvalDomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iteration failed to converge or an accuracy budget ran out.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix violated a structural expectation (bandedness, block pattern,
/// Hermitian symmetry).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace perispec

#endif
