#include "g2lab/model1d.hpp"

#include <algorithm>
#include <cmath>

namespace g2lab {

namespace {

// symmetric operators reorder their arguments so that swapped calls run the
// identical floating-point accumulation
bool canonical_order(const UnivariatePoly& a, const UnivariatePoly& b) {
  const auto& ca = a.coefficients();
  const auto& cb = b.coefficients();
  if (ca.size() != cb.size()) return ca.size() < cb.size();
  for (size_t k = 0; k < ca.size(); ++k)
    if (ca[k] != cb[k]) return ca[k] < cb[k];
  return true;
}

} // namespace

UnivariatePoly model_gamma(const UnivariatePoly& f, const UnivariatePoly& g) {
  if (!canonical_order(f, g)) return model_gamma(g, f);
  return f.derivative() * g.derivative();
}

UnivariatePoly model_generator(const UnivariatePoly& V, const UnivariatePoly& f) {
  return f.derivative().derivative() - V.derivative() * f.derivative();
}

UnivariatePoly model_gamma2(const UnivariatePoly& V, const UnivariatePoly& f,
                            const UnivariatePoly& g) {
  if (!canonical_order(f, g)) return model_gamma2(V, g, f);
  const UnivariatePoly fpp = f.derivative().derivative();
  const UnivariatePoly gpp = g.derivative().derivative();
  return fpp * gpp + V.derivative().derivative() * f.derivative() * g.derivative();
}

UnivariatePoly model_h(const UnivariatePoly& f, const UnivariatePoly& g, const UnivariatePoly& h) {
  return f.derivative().derivative() * g.derivative() * h.derivative();
}

namespace {

// residual report for an exact polynomial identity lhs == rhs
CheckReport zero_poly_report(const std::string& name, const UnivariatePoly& lhs,
                             const UnivariatePoly& rhs) {
  const UnivariatePoly diff = lhs - rhs;
  const double scale =
      std::max({1.0, lhs.max_abs_coefficient(), rhs.max_abs_coefficient()});
  return make_report(name, "-", diff.max_abs_coefficient(), 0.0, 1e-9 * scale);
}

void require_zero_at_origin(const MultivariatePoly& p, const char* label) {
  if (p.eval_at_origin() != 0.0)
    throw Error(errc::nonzero_at_origin, std::string(label) + " must vanish at the origin");
}

std::vector<UnivariatePoly> partials_at(const MultivariatePoly& Phi,
                                        const std::vector<UnivariatePoly>& f) {
  std::vector<UnivariatePoly> out;
  out.reserve(Phi.nvars());
  for (int i = 0; i < Phi.nvars(); ++i) out.push_back(Phi.partial(i).compose(f));
  return out;
}

} // namespace

std::vector<CheckReport> verify_calculus_rules(const std::vector<UnivariatePoly>& f_list,
                                               const UnivariatePoly& V, const MultivariatePoly& Phi,
                                               const MultivariatePoly& Psi, Interval interval) {
  (void)interval;
  if (f_list.empty()) throw Error(errc::size_mismatch, "need at least one test polynomial");
  const int n = Phi.nvars();
  if (Psi.nvars() != n) throw Error(errc::size_mismatch, "Phi and Psi variable counts differ");
  require_zero_at_origin(Phi, "Phi");
  require_zero_at_origin(Psi, "Psi");

  std::vector<UnivariatePoly> f(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) f[static_cast<size_t>(i)] = f_list[i % f_list.size()];

  const UnivariatePoly& u = f_list[0];
  const UnivariatePoly& v = f_list[1 % f_list.size()];
  const UnivariatePoly& w = f_list[2 % f_list.size()];

  std::vector<CheckReport> out;

  // Leibniz rule: Γ(uv, w) = u Γ(v,w) + v Γ(u,w)
  out.push_back(zero_poly_report("leibniz_rule", model_gamma(u * v, w),
                                 u * model_gamma(v, w) + v * model_gamma(u, w)));

  // chain rule: Γ(Φ(f), Ψ(f)) = Σ Φ_i Ψ_j Γ(f_i, f_j)
  {
    const auto phi_i = partials_at(Phi, f);
    const auto psi_j = partials_at(Psi, f);
    UnivariatePoly rhs;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rhs = rhs + phi_i[i] * psi_j[j] * model_gamma(f[i], f[j]);
    out.push_back(zero_poly_report("chain_rule", model_gamma(Phi.compose(f), Psi.compose(f)), rhs));
  }

  // composition: L(Φ(f)) = Σ Φ_i L f_i + Σ Φ_ij Γ(f_i, f_j)
  {
    const auto phi_i = partials_at(Phi, f);
    UnivariatePoly rhs;
    for (int i = 0; i < n; ++i) rhs = rhs + phi_i[i] * model_generator(V, f[i]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rhs = rhs + Phi.partial(i).partial(j).compose(f) * model_gamma(f[i], f[j]);
    out.push_back(zero_poly_report("generator_composition", model_generator(V, Phi.compose(f)), rhs));
  }

  // product rule: L(uv) = u Lv + v Lu + 2 Γ(u,v)
  out.push_back(zero_poly_report(
      "generator_product", model_generator(V, u * v),
      u * model_generator(V, v) + v * model_generator(V, u) + 2.0 * model_gamma(u, v)));

  return out;
}

CheckReport verify_fundamental_identity(const std::vector<UnivariatePoly>& f_list,
                                        const UnivariatePoly& V, const MultivariatePoly& Phi,
                                        Interval interval) {
  (void)interval;
  const int n = Phi.nvars();
  if (static_cast<int>(f_list.size()) < n)
    throw Error(errc::size_mismatch, "need one test polynomial per variable");
  require_zero_at_origin(Phi, "Phi");

  std::vector<UnivariatePoly> f(f_list.begin(), f_list.begin() + n);
  const auto phi_i = partials_at(Phi, f);

  std::vector<std::vector<UnivariatePoly>> phi_ij(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    phi_ij[static_cast<size_t>(i)].resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
      phi_ij[static_cast<size_t>(i)][static_cast<size_t>(j)] = Phi.partial(i).partial(j).compose(f);
  }

  const UnivariatePoly composed = Phi.compose(f);
  const UnivariatePoly lhs = model_gamma2(V, composed, composed);

  UnivariatePoly rhs;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rhs = rhs + phi_i[i] * phi_i[j] * model_gamma2(V, f[i], f[j]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        rhs = rhs + 2.0 * phi_i[i] * phi_ij[j][k] * model_h(f[i], f[j], f[k]);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int h = 0; h < n; ++h)
          rhs = rhs + phi_ij[i][k] * phi_ij[j][h] * model_gamma(f[i], f[j]) * model_gamma(f[k], f[h]);

  return zero_poly_report("fundamental_identity", lhs, rhs);
}

namespace {

// certify p >= 0 on [lo, hi]: sample densely and check the sign at every
// critical point of p inside the interval
bool certify_nonnegative(const UnivariatePoly& p, double lo, double hi, int dense_samples,
                         double tol) {
  for (int s = 0; s < dense_samples; ++s) {
    const double x = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(dense_samples - 1);
    if (p.eval(x) < -tol) return false;
  }
  for (double r : p.derivative().real_roots(lo, hi))
    if (p.eval(r) < -tol) return false;
  return true;
}

} // namespace

std::vector<CheckReport> verify_theorem_estimates(const UnivariatePoly& f, const UnivariatePoly& g,
                                                  const UnivariatePoly& h, const UnivariatePoly& V,
                                                  double K, Interval interval, int n_samples) {
  if (n_samples < 2) throw Error(errc::size_mismatch, "need at least two sample points");
  const UnivariatePoly excess = V.derivative().derivative() - UnivariatePoly::constant(K); // V'' - K
  const double premise_tol = 1e-11 * std::max(1.0, excess.max_abs_coefficient());
  if (!certify_nonnegative(excess, interval.lo, interval.hi, 10 * n_samples, premise_tol))
    throw Error(errc::curvature_premise_violation, "V'' < K somewhere on the interval");

  const UnivariatePoly gamma_f = model_gamma(f, f);
  const UnivariatePoly gamma_g = model_gamma(g, g);
  const UnivariatePoly gamma_h = model_gamma(h, h);
  const UnivariatePoly excess_f = model_gamma2(V, f, f) - K * gamma_f; // = f''² + (V''-K) f'²
  const UnivariatePoly excess_g = model_gamma2(V, g, g) - K * gamma_g;
  const UnivariatePoly h_fgh = model_h(f, g, h);
  const UnivariatePoly gamma_fg = model_gamma(f, g);
  const UnivariatePoly gamma_of_gamma_fg = model_gamma(gamma_fg, gamma_fg);
  const UnivariatePoly gamma_of_gamma_f = model_gamma(gamma_f, gamma_f);

  struct Worst {
    double lhs = 0.0, rhs = 0.0, slack = 0.0, scale = 1.0, at = 0.0;
    bool first = true;
    void update(double l, double r, double x) {
      const double s = r - l;
      if (first || s < slack) {
        lhs = l;
        rhs = r;
        slack = s;
        at = x;
        first = false;
      }
      scale = std::max({scale, std::abs(l), std::abs(r)});
    }
  };
  Worst w_hb, w_sqrt, w_gg;

  for (int s = 0; s < n_samples; ++s) {
    const double x =
        interval.lo + (interval.hi - interval.lo) * static_cast<double>(s) / static_cast<double>(n_samples - 1);
    const double ef = std::max(0.0, excess_f.eval(x));
    const double eg = std::max(0.0, excess_g.eval(x));
    const double gf = std::max(0.0, gamma_f.eval(x));
    const double gg = std::max(0.0, gamma_g.eval(x));
    const double gh = std::max(0.0, gamma_h.eval(x));

    const double hv = h_fgh.eval(x);
    w_hb.update(hv * hv, ef * gg * gh, x);

    w_sqrt.update(std::sqrt(std::max(0.0, gamma_of_gamma_fg.eval(x))),
                  std::sqrt(ef) * std::sqrt(gg) + std::sqrt(eg) * std::sqrt(gf), x);

    w_gg.update(gamma_of_gamma_f.eval(x), 4.0 * ef * gf, x);
  }

  std::vector<CheckReport> out;
  out.push_back(make_report("hessian_bound", format_g17(w_hb.at), w_hb.lhs, w_hb.rhs,
                            1e-10 * w_hb.scale));
  out.push_back(make_report("gamma_gradient_bound", format_g17(w_sqrt.at), w_sqrt.lhs, w_sqrt.rhs,
                            1e-10 * w_sqrt.scale));
  out.push_back(make_report("gamma_of_gamma_bound", format_g17(w_gg.at), w_gg.lhs, w_gg.rhs,
                            1e-10 * w_gg.scale));
  return out;
}

} // namespace g2lab
