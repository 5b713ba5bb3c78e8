#pragma once

#include <vector>

#include "g2lab/poly.hpp"
#include "g2lab/report.hpp"

namespace g2lab {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

// Smooth 1D model space (ℝ, e^{-V(x)} dx) with exact polynomial calculus:
//   Γ(f,g) = f'g',   Lf = f'' - V'f',   Γ₂(f,g) = f''g'' + V''f'g',
//   H[f;g,h] = f''g'h'.
UnivariatePoly model_gamma(const UnivariatePoly& f, const UnivariatePoly& g);
UnivariatePoly model_generator(const UnivariatePoly& V, const UnivariatePoly& f);
UnivariatePoly model_gamma2(const UnivariatePoly& V, const UnivariatePoly& f,
                            const UnivariatePoly& g);
UnivariatePoly model_h(const UnivariatePoly& f, const UnivariatePoly& g, const UnivariatePoly& h);

// Leibniz, chain, composition and product rules, each checked as an exact
// polynomial identity (the difference polynomial must vanish).
std::vector<CheckReport> verify_calculus_rules(const std::vector<UnivariatePoly>& f_list,
                                               const UnivariatePoly& V, const MultivariatePoly& Phi,
                                               const MultivariatePoly& Psi, Interval interval);

// Multivariate expansion of Γ₂(Φ(f)) into Γ₂, H and Γ·Γ contributions,
// checked as an exact polynomial identity.
CheckReport verify_fundamental_identity(const std::vector<UnivariatePoly>& f_list,
                                        const UnivariatePoly& V, const MultivariatePoly& Phi,
                                        Interval interval);

// Pointwise self-improvement estimates under the premise V'' >= K on the
// interval (premise certified by sampling plus critical-point analysis):
//   |H[f;g,h]|²          <= (Γ₂(f) - KΓ(f)) Γ(g) Γ(h)
//   sqrt(Γ(Γ(f,g)))      <= sqrt(Γ₂(f)-KΓ(f)) sqrt(Γ(g)) + sqrt(Γ₂(g)-KΓ(g)) sqrt(Γ(f))
//   Γ(Γ(f))              <= 4 (Γ₂(f) - KΓ(f)) Γ(f)
std::vector<CheckReport> verify_theorem_estimates(const UnivariatePoly& f, const UnivariatePoly& g,
                                                  const UnivariatePoly& h, const UnivariatePoly& V,
                                                  double K, Interval interval, int n_samples);

} // namespace g2lab
