// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_BLOCKJACOBI_HPP
#define PERISPEC_BLOCKJACOBI_HPP

#include <complex>
#include <vector>

#include "perispec/linalg.hpp"

namespace perispec {

/// Half-line block Jacobi operator with l x l blocks: B_n on the diagonal
/// (Hermitian), A_n above it (invertible), A_n^dagger below.  With a free
/// tail, A_n = 1 and B_n = 0 beyond the stored blocks.
struct BlockJacobi {
  int l = 1;
  std::vector<Matrix> A;
  std::vector<Matrix> B;
  bool free_tail = true;

  int stored_blocks() const { return static_cast<int>(B.size()); }
  Matrix A_at(int n) const;  // 1-based
  Matrix B_at(int n) const;

  /// One block stripped from the top.
  BlockJacobi stripped(int count = 1) const;

  /// Dense ln x ln truncation.
  Matrix truncation(int n_blocks) const;

  void validate() const;  // A_n invertible, B_n Hermitian (raises InputError)

  static BlockJacobi scalar(std::vector<double> a, std::vector<double> b, bool free_tail = true);
};

struct TypeFlags {
  bool type1 = false;  // all A_n Hermitian positive definite
  bool type2 = false;  // all partial products A_1...A_n positive definite
  bool type3 = false;  // all A_n lower triangular with positive diagonal
  bool none() const { return !type1 && !type2 && !type3; }
};

TypeFlags classify_type(const BlockJacobi& j, double tol = 1e-11);

/// Equivalent block Jacobi operator of the requested type (1, 2 or 3) via a
/// block-diagonal unitary with U_1 = 1.
BlockJacobi to_type(const BlockJacobi& j, int target);

/// |A| = sqrt(A^dagger A) together with the unique lower-triangular
/// positive-diagonal L with |L| = |A| (Gram-Schmidt on the columns of |A|
/// from right to left).
std::pair<Matrix, Matrix> abs_and_cholesky(const Matrix& a);

struct NevaiDiagnostic {
  std::vector<int> from;          // block index grid
  std::vector<double> b_tail;     // sup_{n >= N} ||B_n||
  std::vector<double> ata_tail;   // sup_{n >= N} ||A_n^dagger A_n - 1||
  std::vector<double> a_tail;     // sup_{n >= N} ||A_n - 1||
};

NevaiDiagnostic nevai_diagnostic(const BlockJacobi& j);

/// Disk Herglotz function M(z) = -m(z + 1/z) of a free-tail operator by
/// backward coefficient stripping from the exact free-tail value M = z.
/// Requires 0 < |z| < 1; raises NumericError at a pole.
Matrix m_disk(const BlockJacobi& j, std::complex<double> z);

/// Stieltjes transform m(E) = integral of (x-E)^{-1} against the matrix
/// measure; E = z + 1/z with |z| < 1 picking the resolvent branch.
Matrix m_function(const BlockJacobi& j, std::complex<double> e);

struct MatrixPointMeasure {
  std::vector<double> points;
  std::vector<Matrix> weights;  // l x l positive semidefinite, summing to 1

  Matrix stieltjes(std::complex<double> e) const;  // sum w_j / (x_j - E)
};

/// Spectral measure of the ln x ln truncation: weights are outer products of
/// the first l rows of the eigenvectors.
MatrixPointMeasure truncation_measure(const BlockJacobi& j, int n_blocks);

struct PoleInfo {
  double z;
  int order;
  double fit_residual;
};

/// Poles of det M(z) inside an interval of (-1,1)\{0}: sign-change scan of
/// 1/det M plus dip detection for even orders, then bisection; order from the
/// slope of the circle average of log|det M| against log r.
std::vector<PoleInfo> poles_of_det_m(const BlockJacobi& j, double lo, double hi,
                                     int grid = 2000);

/// Eigenvalues E = z + 1/z of the operator outside [-2,2], from the poles of
/// det M on (-1,1) with multiplicities.
std::vector<double> eigenvalues_outside(const BlockJacobi& j);

}  // namespace perispec

#endif
