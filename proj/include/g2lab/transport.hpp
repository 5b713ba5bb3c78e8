#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "g2lab/semigroup.hpp"

namespace g2lab {

// Probability measure with finite support on the real line.
struct DiscreteMeasure {
  std::vector<double> support; // strictly increasing for quantile operations
  std::vector<double> weights; // nonnegative, sum 1 within 1e-10
};

// Validates weights and merges duplicate support positions by weight addition.
DiscreteMeasure make_discrete_measure(std::vector<double> support, std::vector<double> weights);

// Coupling with the simplex basis property (at most rows+cols-1 entries).
struct TransportPlan {
  int rows = 0, cols = 0;
  struct Entry {
    int i, j;
    double mass;
  };
  std::vector<Entry> entries;
};

// Nondecreasing transport cost r -> h(arg_scale * r).
struct CostFunction {
  enum class Kind { power, sup, custom };
  Kind kind = Kind::power;
  double p = 1.0;
  std::vector<std::pair<double, double>> breakpoints; // (r, h(r)), flat beyond the last
  double arg_scale = 1.0;

  static CostFunction power(double p);
  static CostFunction sup();
  static CostFunction custom(std::vector<std::pair<double, double>> breakpoints);

  CostFunction perturbed(double scale) const; // r -> h(scale * r)
  double operator()(double r) const;
};

constexpr double kInfiniteP = std::numeric_limits<double>::infinity();

// Monotone (quantile) coupling mass chunks, in quantile order.
struct MassChunk {
  double from, to, mass;
};
std::vector<MassChunk> monotone_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// W_p on the line via the quantile coupling; p = kInfiniteP gives the
// maximal quantile gap.
double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

Matrix distance_matrix_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Exact transportation simplex (north-west-corner start, Bland's rule).
// Optimality is certified by the returned dual potentials:
// u_i + v_j <= c_ij everywhere, equality on basic entries.
struct LpResult {
  double cost = 0.0;
  TransportPlan plan;
  std::vector<double> u, v;
  double max_dual_violation = 0.0;
};

LpResult transport_cost_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const CostFunction& cost, const Matrix& distance);

// Fundamental solution at time t started from state x, realized as the x-row
// of the heat kernel. Roundoff negatives are clamped to zero and recorded;
// clamped mass beyond 1e-8 raises ExcessClamp.
DiscreteMeasure heat_flow_dirac(const SpectralFactorization& sf, int x_index, double t,
                                double* clamped_mass = nullptr);

// Relative entropy Σ ρ log ρ dm of μ = ρ m (0·log 0 = 0).
double entropy(const DiscreteMeasure& mu, const Measure& m);

double measure_mean(const DiscreteMeasure& mu);
double measure_variance(const DiscreteMeasure& mu);

// Heat-flow contraction reports between two fundamental solutions:
// W_p decay at rate K for every p, plus perturbed-cost contraction
// (cost h(e^{Kt} r) after flowing for time t is at most the initial cost).
std::vector<CheckReport> contraction_experiment(const SpectralFactorization& sf,
                                                const ReversibleGenerator& gen, double K, double x,
                                                double y, const std::vector<double>& t_list,
                                                const std::vector<double>& p_list,
                                                const std::vector<CostFunction>& h_list);

// Least-squares slope of log w against t (decay-rate fit).
double fit_log_slope(const std::vector<double>& t, const std::vector<double>& w);

// Evolution variational inequality along the heat flow of mu0:
//   d/dt ½W₂²(μ_t, ν) + (K/2) W₂²(μ_t, ν) <= Ent(ν) - Ent(μ_t) + tol,
// with a centered difference of step delta and tol = 10·delta + 5·h.
std::vector<CheckReport> evi_check(const SpectralFactorization& sf, const ReversibleGenerator& gen,
                                   double K, const DiscreteMeasure& mu0, const DiscreteMeasure& nu,
                                   const std::vector<double>& t_list, double delta);

// Displacement K-convexity of the entropy along quantile interpolation,
// plus the geodesic identity W₂(μ0, μ_t) = t W₂(μ0, μ1).
std::vector<CheckReport> displacement_convexity_check(const DiscreteMeasure& mu0,
                                                      const DiscreteMeasure& mu1,
                                                      const ReversibleGenerator& gen, double K,
                                                      const std::vector<double>& t_list);

} // namespace g2lab
