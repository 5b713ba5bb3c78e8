#pragma once

#include <string>
#include <vector>

#include "g2lab/report.hpp"
#include "g2lab/space.hpp"

namespace g2lab {

// Carré du champ  Γ(f,g) = ½(L(fg) - f·Lg - g·Lf).
Field gamma(const ReversibleGenerator& gen, const Field& f, const Field& g);
Field gamma(const ReversibleGenerator& gen, const Field& f);

// Iterated form  Γ₂(f,g) = ½(LΓ(f,g) - Γ(f,Lg) - Γ(g,Lf)).
Field gamma2(const ReversibleGenerator& gen, const Field& f, const Field& g);
Field gamma2(const ReversibleGenerator& gen, const Field& f);

// Weak form  Γ₂(f;φ) = ∫(½Γ(f)·Lφ - Γ(f,Lf)·φ) dm.
// On a finite space this equals Σ_x Γ₂(f)(x) φ(x) m_x.
double gamma2_weak(const ReversibleGenerator& gen, const Field& f, const Field& phi);

// Trilinear operator  H[f;g,h] = ½(Γ(g,Γ(f,h)) + Γ(h,Γ(f,g)) - Γ(f,Γ(g,h))).
Field h_operator(const ReversibleGenerator& gen, const Field& f, const Field& g, const Field& h);

// Single-state evaluations (row-sparsity aware; used by the pencil assembly
// and by quotient-minimization oracles).
double gamma_at(const ReversibleGenerator& gen, const Field& f, const Field& g, int x);
double gamma2_at(const ReversibleGenerator& gen, const Field& f, const Field& g, int x);

// Pointwise quadratic forms at one state: f ↦ Γ₂(f)(x) = fᵀAf and
// f ↦ Γ(f)(x) = fᵀBf with B positive semidefinite.
struct QuadraticFormPair {
  Matrix a;
  Matrix b;
  int state = 0;
};

QuadraticFormPair quadratic_forms_at(const ReversibleGenerator& gen, int x);

// Extended-real curvature value; infinities are named variants, never
// floating infinities.
enum class CurvatureKind { finite, plus_infinity, minus_infinity };

struct CurvatureResult {
  CurvatureKind kind = CurvatureKind::finite;
  double value = 0.0; // meaningful only when finite
  int state = -1;     // argmin state for the global/interior minima

  bool is_finite() const { return kind == CurvatureKind::finite; }
  std::string to_string() const;
};

// Largest K with Γ₂(·)(x) - K·Γ(·)(x) positive semidefinite, by bisection on
// the smallest pencil eigenvalue over the distance-2 active block.
CurvatureResult curvature_at(const ReversibleGenerator& gen, int x);

// min over states; the Bakry-Émery lower bound of the whole chain.
CurvatureResult curvature_global(const ReversibleGenerator& gen);

// min over grid states further than `margin` from both endpoints
// (defaults to a tenth of the interval); requires positions.
CurvatureResult curvature_interior(const ReversibleGenerator& gen, double margin = -1.0);

// Curvature bound used for semigroup/transport premise checks: interior
// curvature for grids (reflecting ends distort the local value), global
// curvature for abstract chains.
CurvatureResult effective_curvature(const ReversibleGenerator& gen);

// Discrete maximum-principle estimate: premise u >= 0 and Lu + g >= 0
// pointwise; conclusion E(u) <= ∫ u g dm together with ∫ g dm >= 0.
CheckReport lapmeas_check(const ReversibleGenerator& gen, const Field& u, const Field& g);

} // namespace g2lab
