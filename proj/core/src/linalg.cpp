// SPDX-License-Identifier: Apache-2.0

#include "perispec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "perispec/errors.hpp"

extern "C" {
void zheev_(const char* jobz, const char* uplo, const int* n, std::complex<double>* a,
            const int* lda, double* w, std::complex<double>* work, const int* lwork,
            double* rwork, int* info);
}

namespace perispec {

Matrix::Matrix(int rows, int cols, std::initializer_list<cdouble> entries) : Matrix(rows, cols) {
  if (static_cast<int>(entries.size()) != rows * cols)
    throw InputError("Matrix initializer size mismatch");
  std::copy(entries.begin(), entries.end(), a_.begin());
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix r = *this;
  r += o;
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  Matrix r = *this;
  r -= o;
  return r;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch in +");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw InputError("matrix shape mismatch in -");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw InputError("matrix shape mismatch in *");
  Matrix r(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const cdouble aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

Matrix Matrix::operator*(cdouble s) const {
  Matrix r = *this;
  for (auto& v : r.a_) v *= s;
  return r;
}

Matrix Matrix::adjoint() const {
  Matrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::conj() const {
  Matrix r = *this;
  for (auto& v : r.a_) v = std::conj(v);
  return r;
}

cdouble Matrix::trace() const {
  cdouble t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return std::sqrt(s);
}

double Matrix::hermiticity_defect() const {
  if (rows_ != cols_) return 1.0;
  double scale = max_abs();
  if (scale == 0.0) return 0.0;
  double d = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j <= i; ++j)
      d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return d / scale;
}

EigenResult herm_eigen(const Matrix& m, bool want_vectors) {
  if (m.rows() != m.cols()) throw InputError("herm_eigen: matrix not square");
  const int n = m.rows();
  if (n == 0) return {};
  if (m.hermiticity_defect() > 1e-12)
    throw InputError("herm_eigen: matrix not Hermitian within 1e-12 relative");

  // LAPACK is column-major; store the Hermitian average transposed.
  std::vector<cdouble> a(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      a[static_cast<std::size_t>(j) * n + i] = 0.5 * (m(i, j) + std::conj(m(j, i)));

  std::vector<double> w(n);
  std::vector<double> rwork(std::max(1, 3 * n - 2));
  int lwork = -1, info = 0;
  cdouble wkopt;
  const char jobz = want_vectors ? 'V' : 'N';
  const char uplo = 'L';
  zheev_(&jobz, &uplo, &n, a.data(), &n, w.data(), &wkopt, &lwork, rwork.data(), &info);
  lwork = static_cast<int>(wkopt.real());
  std::vector<cdouble> work(std::max(1, lwork));
  zheev_(&jobz, &uplo, &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &info);
  if (info != 0) throw NumericError("herm_eigen: LAPACK zheev failed, info=" + std::to_string(info));

  EigenResult r;
  r.values = std::move(w);
  if (want_vectors) {
    r.vectors = Matrix(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        r.vectors(i, j) = a[static_cast<std::size_t>(j) * n + i];
  }
  return r;
}

std::vector<double> singular_values(const Matrix& m) {
  // Singular values via the Hermitian eigenproblem of A^dagger A; the
  // matrices here are small and well scaled, so the squaring is harmless.
  Matrix g = m.adjoint() * m;
  auto eig = herm_eigen(g, false);
  std::vector<double> s;
  s.reserve(eig.values.size());
  for (auto it = eig.values.rbegin(); it != eig.values.rend(); ++it)
    s.push_back(std::sqrt(std::max(0.0, *it)));
  return s;
}

double operator_norm(const Matrix& m) {
  auto s = singular_values(m);
  return s.empty() ? 0.0 : s.front();
}

Matrix solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) throw InputError("solve: shape mismatch");
  const int n = a.rows(), k = b.cols();
  Matrix lu = a, x = b;
  std::vector<int> piv(n);
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(lu(i, c)) > std::abs(lu(p, c))) p = i;
    if (std::abs(lu(p, c)) < 1e-300) throw NumericError("solve: singular matrix");
    piv[c] = p;
    if (p != c)
      for (int j = 0; j < n; ++j) std::swap(lu(c, j), lu(p, j));
    if (p != c)
      for (int j = 0; j < k; ++j) std::swap(x(c, j), x(p, j));
    for (int i = c + 1; i < n; ++i) {
      cdouble f = lu(i, c) / lu(c, c);
      lu(i, c) = f;
      for (int j = c + 1; j < n; ++j) lu(i, j) -= f * lu(c, j);
      for (int j = 0; j < k; ++j) x(i, j) -= f * x(c, j);
    }
  }
  for (int c = n - 1; c >= 0; --c) {
    for (int j = 0; j < k; ++j) {
      cdouble s = x(c, j);
      for (int i = c + 1; i < n; ++i) s -= lu(c, i) * x(i, j);
      x(c, j) = s / lu(c, c);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

cdouble determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("determinant: matrix not square");
  const int n = a.rows();
  Matrix lu = a;
  cdouble det = 1.0;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(lu(i, c)) > std::abs(lu(p, c))) p = i;
    if (std::abs(lu(p, c)) == 0.0) return 0.0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(lu(c, j), lu(p, j));
      det = -det;
    }
    det *= lu(c, c);
    for (int i = c + 1; i < n; ++i) {
      cdouble f = lu(i, c) / lu(c, c);
      for (int j = c + 1; j < n; ++j) lu(i, j) -= f * lu(c, j);
    }
  }
  return det;
}

Matrix abs_of(const Matrix& a) {
  if (a.rows() != a.cols()) throw InputError("abs_of: matrix not square");
  Matrix g = a.adjoint() * a;
  auto eig = herm_eigen(g, true);
  const int n = a.rows();
  Matrix r(n, n);
  for (int k = 0; k < n; ++k) {
    double s = std::sqrt(std::max(0.0, eig.values[k]));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) += s * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return r;
}

Matrix imag_part(const Matrix& m) {
  Matrix r = m - m.adjoint();
  return r * cdouble(0.0, -0.5);
}

bool is_lower_triangular_positive(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  double scale = std::max(1e-300, a.max_abs());
  for (int i = 0; i < a.rows(); ++i) {
    if (!(a(i, i).real() > 0.0) || std::abs(a(i, i).imag()) > tol * scale) return false;
    for (int j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j)) > tol * scale) return false;
  }
  return true;
}

}  // namespace perispec
