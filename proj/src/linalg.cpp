#include "g2lab/linalg.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>

namespace g2lab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::size_mismatch: return "SizeMismatch";
    case errc::negative_rate: return "NegativeRate";
    case errc::row_sum_violation: return "RowSumViolation";
    case errc::detailed_balance_violation: return "DetailedBalanceViolation";
    case errc::nonpositive_mass: return "NonpositiveMass";
    case errc::degenerate_grid: return "DegenerateGrid";
    case errc::overflow: return "Overflow";
    case errc::indefinite_gamma: return "IndefiniteGamma";
    case errc::premise_violation: return "PremiseViolation";
    case errc::degree_overflow: return "DegreeOverflow";
    case errc::parse_error: return "ParseError";
    case errc::nonzero_at_origin: return "NonzeroAtOrigin";
    case errc::curvature_premise_violation: return "CurvaturePremiseViolation";
    case errc::eigensolver_no_convergence: return "EigensolverNoConvergence";
    case errc::negative_time: return "NegativeTime";
    case errc::nonpositive_epsilon: return "NonpositiveEpsilon";
    case errc::alpha_out_of_range: return "AlphaOutOfRange";
    case errc::k_exceeds_curvature: return "KExceedsCurvature";
    case errc::unsorted_support: return "UnsortedSupport";
    case errc::infeasible: return "Infeasible";
    case errc::size_overflow: return "SizeOverflow";
    case errc::support_mismatch: return "SupportMismatch";
    case errc::excess_clamp: return "ExcessClamp";
    case errc::step_too_large: return "StepTooLarge";
    case errc::config_parse: return "ConfigParse";
    case errc::malformed_report: return "MalformedReport";
  }
  return "Error";
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != m.cols())
    throw Error(errc::size_mismatch, "matvec dimension mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs(const Matrix& m) {
  double v = 0.0;
  for (double a : m.data()) v = std::max(v, std::abs(a));
  return v;
}

namespace {

// One cyclic Jacobi pass over the strict upper triangle.
// Returns the off-diagonal Frobenius mass before the pass.
double jacobi_sweep(Matrix& a, Matrix* v) {
  const int n = a.rows();
  double off = 0.0;
  for (int p = 0; p < n - 1; ++p)
    for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
  if (off == 0.0) return 0.0;

  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double app = a(p, p), aqq = a(q, q);
      const double tau = (aqq - app) / (2.0 * apq);
      // smaller-root tangent keeps rotations well conditioned
      double t;
      if (tau >= 0.0)
        t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
      else
        t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;

      for (int k = 0; k < n; ++k) {
        const double akp = a(k, p), akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (int k = 0; k < n; ++k) {
        const double apk = a(p, k), aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      a(p, q) = 0.0;
      a(q, p) = 0.0;
      if (v) {
        for (int k = 0; k < n; ++k) {
          const double vkp = (*v)(k, p), vkq = (*v)(k, q);
          (*v)(k, p) = c * vkp - s * vkq;
          (*v)(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  return off;
}

void symmetrize(Matrix& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
}

double run_jacobi(Matrix& a, Matrix* v, int max_sweeps) {
  if (a.rows() != a.cols()) throw Error(errc::size_mismatch, "jacobi needs a square matrix");
  symmetrize(a);
  const int n = a.rows();
  double scale = max_abs(a);
  if (scale == 0.0) return 0.0;
  const double stop = 1e-30 * scale * scale * n * n;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double off = jacobi_sweep(a, v);
    if (off <= stop) return off;
  }
  throw Error(errc::eigensolver_no_convergence, "jacobi did not converge");
}

} // namespace

SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps) {
  const int n = a.rows();
  Matrix v = Matrix::identity(n);
  run_jacobi(a, &v, max_sweeps);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = a(i, i);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double jacobi_lambda_min(Matrix a, int max_sweeps) {
  if (a.rows() == 0) return 0.0;
  run_jacobi(a, nullptr, max_sweeps);
  double lo = a(0, 0);
  for (int i = 1; i < a.rows(); ++i) lo = std::min(lo, a(i, i));
  return lo;
}

} // namespace g2lab
