#include "g2lab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace g2lab {

namespace {

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

} // namespace

SpectralFactorization factorize(const ReversibleGenerator& gen) {
  const int n = gen.size();
  const auto& m = gen.measure.weights;
  std::vector<double> sqrt_m(n);
  for (int i = 0; i < n; ++i) sqrt_m[i] = std::sqrt(m[i]);

  Matrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = sqrt_m[i] * gen.rates(i, j) / sqrt_m[j];

  const double norm_s = max_abs(s);
  const SymmetricEigen eig = jacobi_eigen(s, 100);

  SpectralFactorization sf;
  sf.eigenvalues = eig.values;
  sf.measure = gen.measure;
  sf.positions = gen.space.positions;
  sf.basis = Matrix(n, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) sf.basis(i, k) = eig.vectors(i, k) / sqrt_m[i];

  const double scale = std::max(1.0, norm_s);
  if (sf.eigenvalues.back() > 1e-10 * scale)
    throw Error(errc::eigensolver_no_convergence,
                "positive eigenvalue " + format_g17(sf.eigenvalues.back()) +
                    " from a Markov generator");
  // reconstruction check in the symmetrized frame
  double err = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) v += eig.vectors(i, k) * sf.eigenvalues[k] * eig.vectors(j, k);
      err = std::max(err, std::abs(v - s(i, j)));
    }
  if (err > 1e-8 * scale)
    throw Error(errc::eigensolver_no_convergence,
                "spectral reconstruction error " + format_g17(err));
  return sf;
}

namespace {

// coefficients of f in the m-orthonormal eigenbasis: c = Qᵀ D f
std::vector<double> spectral_coefficients(const SpectralFactorization& sf, const Field& f) {
  const int n = sf.size();
  if (f.size() != n) throw Error(errc::size_mismatch, "field size does not match factorization");
  std::vector<double> c(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += sf.basis(i, k) * sf.measure.weights[i] * f[i];
    c[k] = s;
  }
  return c;
}

Field from_coefficients(const SpectralFactorization& sf, const std::vector<double>& c) {
  const int n = sf.size();
  Field out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += sf.basis(i, k) * c[k];
    out[i] = s;
  }
  return out;
}

// Bump-kernel quadrature on s ∈ [1,2], 129 nodes. The trapezoid rule is
// superalgebraically accurate for C_c^∞ integrands (every Euler-Maclaurin
// endpoint correction vanishes) and its symmetric weights keep the odd
// kernel derivative at exactly zero mass.
struct BumpQuadrature {
  std::vector<double> nodes, weights, kappa, kappa_prime;

  BumpQuadrature() {
    const int n_nodes = 129;
    const double h = 1.0 / static_cast<double>(n_nodes - 1);
    nodes.resize(n_nodes);
    weights.resize(n_nodes);
    kappa.resize(n_nodes);
    kappa_prime.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
      nodes[j] = 1.0 + h * static_cast<double>(j);
      const bool edge = (j == 0 || j == n_nodes - 1);
      weights[j] = edge ? h / 2.0 : h;
    }
    double norm = 0.0;
    for (int j = 0; j < n_nodes; ++j) {
      const double u = 2.0 * nodes[j] - 3.0;
      const double w2 = 1.0 - u * u;
      if (w2 <= 0.0) {
        kappa[j] = 0.0;
        kappa_prime[j] = 0.0;
      } else {
        kappa[j] = std::exp(-1.0 / w2);
        kappa_prime[j] = -4.0 * u / (w2 * w2) * kappa[j];
      }
      norm += weights[j] * kappa[j];
    }
    for (int j = 0; j < n_nodes; ++j) {
      kappa[j] /= norm;
      kappa_prime[j] /= norm;
    }
    // the exact kernel has zero derivative mass; remove the quadrature
    // residue so that integration by parts survives discretization
    double drift = 0.0;
    for (int j = 0; j < n_nodes; ++j) drift += weights[j] * kappa_prime[j];
    for (int j = 0; j < n_nodes; ++j) kappa_prime[j] -= drift * kappa[j];
  }
};

const BumpQuadrature& bump() {
  static const BumpQuadrature q;
  return q;
}

} // namespace

Field heat_apply(const SpectralFactorization& sf, const Field& f, double t) {
  if (t < 0.0) throw Error(errc::negative_time, "heat flow needs t >= 0");
  std::vector<double> c = spectral_coefficients(sf, f);
  for (int k = 0; k < sf.size(); ++k) c[k] *= std::exp(t * std::min(0.0, sf.eigenvalues[k]));
  return from_coefficients(sf, c);
}

std::vector<double> heat_kernel_row(const SpectralFactorization& sf, int x, double t) {
  if (t < 0.0) throw Error(errc::negative_time, "heat flow needs t >= 0");
  const int n = sf.size();
  if (x < 0 || x >= n) throw Error(errc::size_mismatch, "state index out of range");
  std::vector<double> row(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      s += sf.basis(x, k) * std::exp(t * std::min(0.0, sf.eigenvalues[k])) * sf.basis(j, k);
    row[j] = s * sf.measure.weights[j];
  }
  return row;
}

Field mollify(const SpectralFactorization& sf, const Field& f, double eps) {
  if (!(eps > 0.0)) throw Error(errc::nonpositive_epsilon, "mollifier needs eps > 0");
  const auto& q = bump();
  std::vector<double> c = spectral_coefficients(sf, f);
  for (int k = 0; k < sf.size(); ++k) {
    const double lam = std::min(0.0, sf.eigenvalues[k]);
    double g = 0.0;
    for (size_t j = 0; j < q.nodes.size(); ++j)
      g += q.weights[j] * q.kappa[j] * std::exp(lam * eps * q.nodes[j]);
    c[k] *= g;
  }
  return from_coefficients(sf, c);
}

Field mollify_generator_quadrature(const SpectralFactorization& sf, const Field& f, double eps) {
  if (!(eps > 0.0)) throw Error(errc::nonpositive_epsilon, "mollifier needs eps > 0");
  const auto& q = bump();
  std::vector<double> c = spectral_coefficients(sf, f);
  for (int k = 0; k < sf.size(); ++k) {
    const double lam = std::min(0.0, sf.eigenvalues[k]);
    double g = 0.0;
    for (size_t j = 0; j < q.nodes.size(); ++j)
      g += q.weights[j] * q.kappa_prime[j] * std::exp(lam * eps * q.nodes[j]);
    c[k] *= -g / eps;
  }
  return from_coefficients(sf, c);
}

double exponential_integral_2k(double K, double t) {
  if (K == 0.0) return t;
  return std::expm1(2.0 * K * t) / (2.0 * K);
}

std::vector<CheckReport> gradient_estimate_report(const SpectralFactorization& sf,
                                                  const ReversibleGenerator& gen, const Field& f,
                                                  double K, const std::vector<double>& t_list,
                                                  const std::vector<double>& alpha_list) {
  if (f.size() != gen.size()) throw Error(errc::size_mismatch, "field size does not match generator");
  for (double a : alpha_list)
    if (a < 0.5 || a > 1.0)
      throw Error(errc::alpha_out_of_range, "alpha " + format_g17(a) + " outside [1/2, 1]");
  for (double t : t_list)
    if (t < 0.0) throw Error(errc::negative_time, "negative time in t_list");

  const int n = gen.size();
  const double h = grid_spacing(gen);

  // grids get an O(h) margin: the certified interior curvature converges to
  // the continuum bound only as the mesh refines
  const CurvatureResult cap = effective_curvature(gen);
  const double k_margin = 1e-9 * (cap.is_finite() ? std::max(1.0, std::abs(cap.value)) : 1.0) +
                          h * std::max(1.0, std::abs(K));
  if (cap.kind == CurvatureKind::minus_infinity || (cap.is_finite() && K > cap.value + k_margin))
    throw Error(errc::k_exceeds_curvature,
                "claimed K = " + format_g17(K) + " exceeds certified bound " + cap.to_string());
  double f_inf = 0.0;
  for (int i = 0; i < n; ++i) f_inf = std::max(f_inf, std::abs(f[i]));
  // discretization allowance for alpha < 1 on grids (frozen constant)
  const double allowance = 10.0 * std::max(1.0, f_inf) * std::max(1.0, std::abs(K)) * h;

  const Field gamma_f = gamma(gen, f);

  std::vector<CheckReport> out;
  for (double t : t_list) {
    const Field ptf = heat_apply(sf, f, t);
    const Field gamma_ptf = gamma(gen, ptf);

    for (double a : alpha_list) {
      Field powered(n, 0.0);
      for (int i = 0; i < n; ++i) powered[i] = std::pow(std::max(0.0, gamma_f[i]), a);
      const Field pt_powered = heat_apply(sf, powered, t);
      const double factor = std::exp(-2.0 * a * K * t);

      double worst_slack = 0.0, worst_lhs = 0.0, worst_rhs = 0.0, scale = 1.0;
      int worst = 0;
      for (int i = 0; i < n; ++i) {
        const double lhs = std::pow(std::max(0.0, gamma_ptf[i]), a);
        const double rhs = factor * pt_powered[i];
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        if (i == 0 || rhs - lhs < worst_slack) {
          worst_slack = rhs - lhs;
          worst_lhs = lhs;
          worst_rhs = rhs;
          worst = i;
        }
      }
      const double tol = (h > 0.0 ? allowance : 0.0) + 1e-8 * scale;
      out.push_back(make_report("gradient_commutation(t=" + fmt_short(t) + ";a=" + fmt_short(a) + ")",
                                std::to_string(worst), worst_lhs, worst_rhs, tol));
    }

    // variance bound
    {
      Field f2(n, 0.0);
      for (int i = 0; i < n; ++i) f2[i] = f[i] * f[i];
      const Field ptf2 = heat_apply(sf, f2, t);
      const double i2k = exponential_integral_2k(K, t);

      double worst_slack = 0.0, worst_lhs = 0.0, worst_rhs = 0.0, scale = 1.0;
      int worst = 0;
      for (int i = 0; i < n; ++i) {
        const double lhs = 2.0 * i2k * gamma_ptf[i];
        const double rhs = ptf2[i] - ptf[i] * ptf[i];
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
        if (i == 0 || rhs - lhs < worst_slack) {
          worst_slack = rhs - lhs;
          worst_lhs = lhs;
          worst_rhs = rhs;
          worst = i;
        }
      }
      const double tol = (h > 0.0 ? allowance : 0.0) + 1e-8 * scale;
      out.push_back(make_report("variance_bound(t=" + fmt_short(t) + ")", std::to_string(worst),
                                worst_lhs, worst_rhs, tol));
    }
  }
  return out;
}

} // namespace g2lab
