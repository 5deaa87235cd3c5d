// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_LINALG_HPP
#define PERISPEC_LINALG_HPP

#include <complex>
#include <initializer_list>
#include <utility>
#include <vector>

namespace perispec {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major.  Sized for the small blocks this library
/// works with (fibers, block entries, truncations up to a few thousand rows).
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
  Matrix(int rows, int cols, std::initializer_list<cdouble> entries);

  static Matrix identity(int n);
  static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cdouble& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cdouble& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(cdouble s) const;
  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;
  cdouble trace() const;

  /// Max |entry|.
  double max_abs() const;
  /// Frobenius norm.
  double frobenius() const;
  /// Max |A - A^dagger| entry, as a fraction of max_abs (0 for the zero matrix).
  double hermiticity_defect() const;

  const std::vector<cdouble>& data() const { return a_; }
  std::vector<cdouble>& data() { return a_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cdouble> a_;
};

struct EigenResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j is the eigenvector of values[j]; empty if not requested
};

/// Eigendecomposition of a Hermitian matrix (symmetry enforced to 1e-12
/// relative; violation raises InputError).  Eigenvalues ascending, vectors
/// orthonormal.  Backed by LAPACK.
EigenResult herm_eigen(const Matrix& m, bool want_vectors = true);

/// Singular values, descending.
std::vector<double> singular_values(const Matrix& m);

/// Largest singular value.
double operator_norm(const Matrix& m);

/// Solve A x = b for small dense A by partial-pivot elimination.
/// Raises NumericError if A is numerically singular.
Matrix solve(const Matrix& a, const Matrix& b);

Matrix inverse(const Matrix& a);

cdouble determinant(const Matrix& a);

/// Hermitian positive square root of A^dagger A.
Matrix abs_of(const Matrix& a);

/// (M - M^dagger) / 2i.
Matrix imag_part(const Matrix& m);

bool is_lower_triangular_positive(const Matrix& a, double tol);

}  // namespace perispec

#endif
