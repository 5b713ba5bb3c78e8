#pragma once

#include <vector>

#include "g2lab/gamma.hpp"
#include "g2lab/space.hpp"

namespace g2lab {

// Spectral data of a reversible generator: L = Q Λ Qᵀ D with D = diag(m)
// and Qᵀ D Q = I (columns are m-orthonormal). Heat flow and mollification
// are exact scalar functions of Λ in this basis.
struct SpectralFactorization {
  std::vector<double> eigenvalues; // ascending, all <= 1e-10
  Matrix basis;                    // columns q_k
  Measure measure;
  std::optional<std::vector<double>> positions; // copied from grid spaces

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Symmetrize S = D^{1/2} L D^{-1/2} and diagonalize.
SpectralFactorization factorize(const ReversibleGenerator& gen);

// P_t f = exp(tL) f, t >= 0.
Field heat_apply(const SpectralFactorization& sf, const Field& f, double t);

// One row of the heat kernel: j -> (P_t)_{xj}; a probability vector up to
// roundoff (negatives are clamped by the transport layer, not here).
std::vector<double> heat_kernel_row(const SpectralFactorization& sf, int x, double t);

// Mollified semigroup: 𝔓_ε f = ∫ P_{εs} f κ(s) ds with κ a C_c^∞ bump on
// s ∈ [1,2], ∫κ = 1 (Simpson quadrature, 129 nodes, discretely normalized
// so constants are preserved exactly).
Field mollify(const SpectralFactorization& sf, const Field& f, double eps);

// The same quadrature applied to -(1/ε) ∫ P_{εs} f κ'(s) ds; equals
// L(𝔓_ε f) up to quadrature error (integration by parts in s).
Field mollify_generator_quadrature(const SpectralFactorization& sf, const Field& f, double eps);

// Pointwise gradient commutation reports for each (t, α):
//   Γ(P_t f)^α <= e^{-2αKt} P_t(Γ(f)^α) + tol
// plus the variance bound per t:
//   2 I_{2K}(t) Γ(P_t f) <= P_t(f²) - (P_t f)² + tol,
// I_{2K}(t) = (e^{2Kt} - 1)/(2K)  (= t at K = 0).
// Exact chains use tol = 1e-8·scale at α = 1; grids get a documented O(h)
// discretization allowance at α < 1.
std::vector<CheckReport> gradient_estimate_report(const SpectralFactorization& sf,
                                                  const ReversibleGenerator& gen, const Field& f,
                                                  double K, const std::vector<double>& t_list,
                                                  const std::vector<double>& alpha_list);

double exponential_integral_2k(double K, double t); // I_{2K}(t)

} // namespace g2lab
