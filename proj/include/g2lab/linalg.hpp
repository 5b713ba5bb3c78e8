#pragma once

#include <vector>

#include "g2lab/errors.hpp"

namespace g2lab {

// Dense row-major matrix. Sized for desk-scale problems (n <= 2000).
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

 private:
  int rows_, cols_;
  std::vector<double> a_;
};

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);

double max_abs(const Matrix& m);

// Symmetric eigendecomposition, eigenvalues ascending.
// vectors.col(k) is the unit eigenvector of values[k].
struct SymmetricEigen {
  std::vector<double> values;
  Matrix vectors;
};

// Cyclic Jacobi rotations; input is symmetrized as (a + a^T)/2.
// Throws eigensolver_no_convergence after max_sweeps sweeps.
SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps = 100);

// Smallest eigenvalue only (same algorithm, no eigenvector accumulation).
double jacobi_lambda_min(Matrix a, int max_sweeps = 100);

} // namespace g2lab
