#include "g2lab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>

namespace g2lab {

namespace {

constexpr double kMassTol = 1e-10;

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void require_sorted(const DiscreteMeasure& mu) {
  for (size_t i = 0; i + 1 < mu.support.size(); ++i)
    if (!(mu.support[i] < mu.support[i + 1]))
      throw Error(errc::unsorted_support, "support positions must be strictly increasing");
}

} // namespace

DiscreteMeasure make_discrete_measure(std::vector<double> support, std::vector<double> weights) {
  if (support.size() != weights.size())
    throw Error(errc::size_mismatch, "support/weight length mismatch");
  if (support.empty()) throw Error(errc::size_mismatch, "empty measure");

  std::vector<int> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return support[a] < support[b]; });

  DiscreteMeasure out;
  double total = 0.0;
  for (int idx : order) {
    const double w = weights[idx];
    if (w < -kMassTol) throw Error(errc::nonpositive_mass, "negative weight");
    total += w;
    if (!out.support.empty() && support[idx] == out.support.back())
      out.weights.back() += std::max(0.0, w); // ties merge by weight addition
    else {
      out.support.push_back(support[idx]);
      out.weights.push_back(std::max(0.0, w));
    }
  }
  if (std::abs(total - 1.0) > kMassTol)
    throw Error(errc::nonpositive_mass, "weights sum to " + format_g17(total) + ", expected 1");
  return out;
}

CostFunction CostFunction::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error(errc::parse_error, "power cost needs p in [1, inf)");
  CostFunction c;
  c.kind = Kind::power;
  c.p = p;
  return c;
}

CostFunction CostFunction::sup() {
  CostFunction c;
  c.kind = Kind::sup;
  return c;
}

CostFunction CostFunction::custom(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.empty()) throw Error(errc::parse_error, "custom cost needs breakpoints");
  for (size_t i = 0; i < breakpoints.size(); ++i) {
    if (i > 0 && !(breakpoints[i].first > breakpoints[i - 1].first))
      throw Error(errc::parse_error, "breakpoint abscissae must increase");
    if (i > 0 && breakpoints[i].second < breakpoints[i - 1].second)
      throw Error(errc::parse_error, "cost function must be nondecreasing");
  }
  if (breakpoints.front().second < 0.0)
    throw Error(errc::parse_error, "cost function must satisfy h(0) >= 0");
  CostFunction c;
  c.kind = Kind::custom;
  c.breakpoints = std::move(breakpoints);
  return c;
}

CostFunction CostFunction::perturbed(double scale) const {
  CostFunction c = *this;
  c.arg_scale *= scale;
  return c;
}

double CostFunction::operator()(double r) const {
  r = std::abs(r) * arg_scale;
  switch (kind) {
    case Kind::power: return std::pow(r, p);
    case Kind::sup: return r; // the sup cost is handled by the quantile solver
    case Kind::custom: {
      if (r <= breakpoints.front().first) return breakpoints.front().second;
      for (size_t i = 1; i < breakpoints.size(); ++i) {
        if (r <= breakpoints[i].first) {
          const auto& [r0, h0] = breakpoints[i - 1];
          const auto& [r1, h1] = breakpoints[i];
          return h0 + (h1 - h0) * (r - r0) / (r1 - r0);
        }
      }
      return breakpoints.back().second; // flat beyond the last breakpoint
    }
  }
  return 0.0;
}

std::vector<MassChunk> monotone_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_sorted(mu);
  require_sorted(nu);
  std::vector<MassChunk> chunks;
  size_t i = 0, j = 0;
  double ra = mu.weights.empty() ? 0.0 : mu.weights[0];
  double rb = nu.weights.empty() ? 0.0 : nu.weights[0];
  while (i < mu.support.size() && j < nu.support.size()) {
    const double take = std::min(ra, rb);
    if (take > 0.0) chunks.push_back({mu.support[i], nu.support[j], take});
    ra -= take;
    rb -= take;
    if (ra <= 0.0) {
      ++i;
      if (i < mu.weights.size()) ra = mu.weights[i];
    }
    if (rb <= 0.0) {
      ++j;
      if (j < nu.weights.size()) rb = nu.weights[j];
    }
  }
  return chunks;
}

double wasserstein_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  if (!(p >= 1.0)) throw Error(errc::parse_error, "wasserstein needs p in [1, inf]");
  const auto chunks = monotone_coupling(mu, nu);
  if (std::isinf(p)) {
    double worst = 0.0;
    for (const auto& c : chunks) worst = std::max(worst, std::abs(c.to - c.from));
    return worst;
  }
  double cost = 0.0;
  for (const auto& c : chunks) cost += c.mass * std::pow(std::abs(c.to - c.from), p);
  return std::pow(cost, 1.0 / p);
}

Matrix distance_matrix_1d(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Matrix d(static_cast<int>(mu.support.size()), static_cast<int>(nu.support.size()));
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j)
      d(i, j) = std::abs(mu.support[static_cast<size_t>(i)] - nu.support[static_cast<size_t>(j)]);
  return d;
}

// ---------------------------------------------------------------------------
// transportation simplex

namespace {

struct BasisCell {
  int i, j;
  double mass;
};

struct SimplexWork {
  int m, n;
  std::vector<BasisCell> basis; // spanning tree of the bipartite graph
  std::vector<std::vector<int>> adj; // node -> incident basis cells; cols offset by m

  int col_node(int j) const { return m + j; }

  void rebuild_adjacency() {
    adj.assign(static_cast<size_t>(m + n), {});
    for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
      adj[static_cast<size_t>(basis[k].i)].push_back(k);
      adj[static_cast<size_t>(col_node(basis[k].j))].push_back(k);
    }
  }

  // u_i + v_j = c_ij on the basis tree
  void solve_duals(const Matrix& c, std::vector<double>& u, std::vector<double>& v) {
    u.assign(static_cast<size_t>(m), 0.0);
    v.assign(static_cast<size_t>(n), 0.0);
    std::vector<char> seen(static_cast<size_t>(m + n), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      for (int k : adj[static_cast<size_t>(node)]) {
        const BasisCell& cell = basis[static_cast<size_t>(k)];
        const int other = (node == cell.i) ? col_node(cell.j) : cell.i;
        if (seen[static_cast<size_t>(other)]) continue;
        seen[static_cast<size_t>(other)] = 1;
        if (other >= m)
          v[static_cast<size_t>(other - m)] = c(cell.i, cell.j) - u[static_cast<size_t>(cell.i)];
        else
          u[static_cast<size_t>(other)] = c(cell.i, cell.j) - v[static_cast<size_t>(cell.j)];
        queue.push_back(other);
      }
    }
  }

  // cells on the tree path from row node i0 to col node j0
  std::vector<int> tree_path(int i0, int j0) {
    std::vector<int> parent_cell(static_cast<size_t>(m + n), -1);
    std::vector<int> parent_node(static_cast<size_t>(m + n), -1);
    std::vector<char> seen(static_cast<size_t>(m + n), 0);
    std::deque<int> queue{i0};
    seen[static_cast<size_t>(i0)] = 1;
    const int target = col_node(j0);
    while (!queue.empty()) {
      const int node = queue.front();
      queue.pop_front();
      if (node == target) break;
      for (int k : adj[static_cast<size_t>(node)]) {
        const BasisCell& cell = basis[static_cast<size_t>(k)];
        const int other = (node == cell.i) ? col_node(cell.j) : cell.i;
        if (seen[static_cast<size_t>(other)]) continue;
        seen[static_cast<size_t>(other)] = 1;
        parent_cell[static_cast<size_t>(other)] = k;
        parent_node[static_cast<size_t>(other)] = node;
        queue.push_back(other);
      }
    }
    std::vector<int> path;
    for (int node = target; node != i0; node = parent_node[static_cast<size_t>(node)]) {
      const int k = parent_cell[static_cast<size_t>(node)];
      if (k < 0) throw Error(errc::infeasible, "basis lost connectivity (internal)");
      path.push_back(k);
    }
    return path; // from the entering column back to the entering row
  }
};

} // namespace

LpResult transport_cost_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const CostFunction& cost, const Matrix& distance) {
  const int m = static_cast<int>(mu.support.size());
  const int n = static_cast<int>(nu.support.size());
  if (m > 500 || n > 500) throw Error(errc::size_overflow, "LP supports capped at 500 points");
  if (distance.rows() != m || distance.cols() != n)
    throw Error(errc::size_mismatch, "distance matrix does not match supports");

  Matrix c(m, n);
  double cost_scale = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      c(i, j) = cost(distance(i, j));
      cost_scale = std::max(cost_scale, std::abs(c(i, j)));
    }

  // balance demand against supply exactly
  std::vector<double> a = mu.weights, b = nu.weights;
  const double sa = std::accumulate(a.begin(), a.end(), 0.0);
  const double sb = std::accumulate(b.begin(), b.end(), 0.0);
  if (std::abs(sa - sb) > 10.0 * kMassTol)
    throw Error(errc::infeasible, "supply/demand totals differ");
  if (sb > 0.0)
    for (double& w : b) w *= sa / sb;

  SimplexWork wk;
  wk.m = m;
  wk.n = n;

  // north-west corner start: exactly m+n-1 basic cells
  {
    int i = 0, j = 0;
    std::vector<double> ra = a, rb = b;
    for (int step = 0; step < m + n - 1; ++step) {
      const double take = std::min(ra[static_cast<size_t>(i)], rb[static_cast<size_t>(j)]);
      wk.basis.push_back({i, j, take});
      ra[static_cast<size_t>(i)] -= take;
      rb[static_cast<size_t>(j)] -= take;
      if (i == m - 1 && j == n - 1) break;
      if ((ra[static_cast<size_t>(i)] <= rb[static_cast<size_t>(j)] && i < m - 1) || j == n - 1)
        ++i;
      else
        ++j;
    }
  }

  std::vector<double> u, v;
  const double enter_tol = 1e-12 * cost_scale;
  const long max_pivots = 200000;
  for (long pivot = 0;; ++pivot) {
    if (pivot > max_pivots)
      throw Error(errc::infeasible, "simplex pivot cap exceeded (internal)");
    wk.rebuild_adjacency();
    wk.solve_duals(c, u, v);

    // Bland's rule: first cell in row-major order with negative reduced cost
    int ei = -1, ej = -1;
    for (int i = 0; i < m && ei < 0; ++i)
      for (int j = 0; j < n; ++j) {
        if (c(i, j) - u[static_cast<size_t>(i)] - v[static_cast<size_t>(j)] < -enter_tol) {
          ei = i;
          ej = j;
          break;
        }
      }
    if (ei < 0) break; // optimal

    const std::vector<int> path = wk.tree_path(ei, ej);
    // cycle signs: entering +, then alternating along the path from the
    // entering column, so even path offsets lose mass
    double theta = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s < path.size(); s += 2)
      theta = std::min(theta, wk.basis[static_cast<size_t>(path[s])].mass);
    // Bland tie break: smallest (i,j) among the minimizers
    int leaving = -1;
    for (size_t s = 0; s < path.size(); s += 2) {
      const BasisCell& cell = wk.basis[static_cast<size_t>(path[s])];
      if (cell.mass > theta) continue;
      if (leaving < 0) {
        leaving = path[s];
        continue;
      }
      const BasisCell& cur = wk.basis[static_cast<size_t>(leaving)];
      if (cell.i < cur.i || (cell.i == cur.i && cell.j < cur.j)) leaving = path[s];
    }

    for (size_t s = 0; s < path.size(); ++s) {
      BasisCell& cell = wk.basis[static_cast<size_t>(path[s])];
      cell.mass += (s % 2 == 0) ? -theta : theta;
      if (cell.mass < 0.0) cell.mass = 0.0;
    }
    wk.basis[static_cast<size_t>(leaving)] = {ei, ej, theta};
  }

  LpResult out;
  out.u = u;
  out.v = v;
  out.plan.rows = m;
  out.plan.cols = n;
  std::vector<double> row_mass(static_cast<size_t>(m), 0.0), col_mass(static_cast<size_t>(n), 0.0);
  for (const auto& cell : wk.basis) {
    out.cost += cell.mass * c(cell.i, cell.j);
    row_mass[static_cast<size_t>(cell.i)] += cell.mass;
    col_mass[static_cast<size_t>(cell.j)] += cell.mass;
    if (cell.mass > 0.0) out.plan.entries.push_back({cell.i, cell.j, cell.mass});
  }
  for (int i = 0; i < m; ++i)
    if (std::abs(row_mass[static_cast<size_t>(i)] - a[static_cast<size_t>(i)]) > 1e-9)
      throw Error(errc::infeasible, "plan row marginal drifted (internal)");
  for (int j = 0; j < n; ++j)
    if (std::abs(col_mass[static_cast<size_t>(j)] - b[static_cast<size_t>(j)]) > 1e-9)
      throw Error(errc::infeasible, "plan column marginal drifted (internal)");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      out.max_dual_violation = std::max(
          out.max_dual_violation, u[static_cast<size_t>(i)] + v[static_cast<size_t>(j)] - c(i, j));
  return out;
}

// ---------------------------------------------------------------------------

DiscreteMeasure heat_flow_dirac(const SpectralFactorization& sf, int x_index, double t,
                                double* clamped_mass) {
  const int n = sf.size();
  if (x_index < 0 || x_index >= n) throw Error(errc::size_mismatch, "state index out of range");
  std::vector<double> support =
      sf.positions ? *sf.positions : [&] {
        std::vector<double> idx(n);
        for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = static_cast<double>(i);
        return idx;
      }();

  std::vector<double> w(n, 0.0);
  if (t == 0.0)
    w[static_cast<size_t>(x_index)] = 1.0;
  else
    w = heat_kernel_row(sf, x_index, t);

  // entries below the spectral reconstruction noise floor are roundoff, not
  // kernel mass; they would corrupt sup-type statistics at absurd quantiles
  double peak = 0.0;
  for (double wi : w) peak = std::max(peak, wi);
  const double floor = 1e-14 * peak;

  double clamped = 0.0, total = 0.0;
  for (double& wi : w) {
    if (wi < floor) {
      clamped += std::abs(wi);
      wi = 0.0;
    }
    total += wi;
  }
  if (clamped_mass) *clamped_mass = clamped;
  if (clamped > 1e-8)
    throw Error(errc::excess_clamp, "clamped heat-kernel mass " + format_g17(clamped));
  for (double& wi : w) wi /= total;
  return make_discrete_measure(std::move(support), std::move(w));
}

double entropy(const DiscreteMeasure& mu, const Measure& m) {
  if (mu.weights.size() != m.weights.size())
    throw Error(errc::support_mismatch, "measure is not aligned with the states");
  double s = 0.0;
  for (size_t i = 0; i < mu.weights.size(); ++i) {
    const double w = mu.weights[i];
    if (w <= 0.0) continue; // 0 log 0 = 0
    s += w * std::log(w / m.weights[i]);
  }
  return s;
}

double measure_mean(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (size_t i = 0; i < mu.weights.size(); ++i) s += mu.support[i] * mu.weights[i];
  return s;
}

double measure_variance(const DiscreteMeasure& mu) {
  const double mean = measure_mean(mu);
  double s = 0.0;
  for (size_t i = 0; i < mu.weights.size(); ++i)
    s += (mu.support[i] - mean) * (mu.support[i] - mean) * mu.weights[i];
  return s;
}

namespace {

int nearest_node(const std::vector<double>& positions, double x) {
  int best = 0;
  double dist = std::abs(positions[0] - x);
  for (size_t i = 1; i < positions.size(); ++i) {
    const double d = std::abs(positions[i] - x);
    if (d < dist) {
      dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

void check_claimed_curvature(const ReversibleGenerator& gen, double K) {
  const CurvatureResult cap = effective_curvature(gen);
  const double margin = 1e-9 * (cap.is_finite() ? std::max(1.0, std::abs(cap.value)) : 1.0) +
                        grid_spacing(gen) * std::max(1.0, std::abs(K));
  if (cap.kind == CurvatureKind::minus_infinity || (cap.is_finite() && K > cap.value + margin))
    throw Error(errc::k_exceeds_curvature,
                "claimed K = " + format_g17(K) + " exceeds certified bound " + cap.to_string());
}

// measure of the flowed density P_t(dμ0/dm) dm, clamped and renormalized
DiscreteMeasure flow_measure(const SpectralFactorization& sf, const ReversibleGenerator& gen,
                             const DiscreteMeasure& mu0, double t) {
  const int n = gen.size();
  if (static_cast<int>(mu0.weights.size()) != n)
    throw Error(errc::support_mismatch, "measure is not aligned with the states");
  Field rho(n, 0.0);
  for (int i = 0; i < n; ++i) rho[i] = mu0.weights[static_cast<size_t>(i)] / gen.measure.weights[i];
  const Field rho_t = heat_apply(sf, rho, t);
  std::vector<double> w(static_cast<size_t>(n), 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    w[static_cast<size_t>(i)] = std::max(0.0, rho_t[i] * gen.measure.weights[i]);
    total += w[static_cast<size_t>(i)];
  }
  for (double& wi : w) wi /= total;
  return make_discrete_measure(mu0.support, std::move(w));
}

} // namespace

std::vector<CheckReport> contraction_experiment(const SpectralFactorization& sf,
                                                const ReversibleGenerator& gen, double K, double x,
                                                double y, const std::vector<double>& t_list,
                                                const std::vector<double>& p_list,
                                                const std::vector<CostFunction>& h_list) {
  if (!gen.space.positions)
    throw Error(errc::degenerate_grid, "contraction experiment needs a grid generator");
  check_claimed_curvature(gen, K);
  const auto& pos = *gen.space.positions;
  const int ix = nearest_node(pos, x);
  const int iy = nearest_node(pos, y);
  const double d0 = std::abs(pos[static_cast<size_t>(ix)] - pos[static_cast<size_t>(iy)]);
  const double h = grid_spacing(gen);

  std::vector<CheckReport> out;
  for (double t : t_list) {
    const DiscreteMeasure rx = heat_flow_dirac(sf, ix, t);
    const DiscreteMeasure ry = heat_flow_dirac(sf, iy, t);
    const double rhs_w = std::exp(-K * t) * d0;

    for (double p : p_list) {
      const double lhs = wasserstein_1d(rx, ry, p);
      if (std::isinf(p))
        out.push_back(make_report("winf_contraction(t=" + fmt_short(t) + ")", fmt_short(t), lhs,
                                  rhs_w, 5.0 * h));
      else
        out.push_back(make_report(
            "wp_contraction(t=" + fmt_short(t) + ";p=" + fmt_short(p) + ")", fmt_short(t), lhs,
            rhs_w, 2.0 * h));
    }

    for (size_t hi = 0; hi < h_list.size(); ++hi) {
      const CostFunction perturbed = h_list[hi].perturbed(std::exp(K * t));
      const LpResult lp = transport_cost_lp(rx, ry, perturbed, distance_matrix_1d(rx, ry));
      if (lp.max_dual_violation > 1e-9 * std::max(1.0, std::abs(lp.cost)))
        throw Error(errc::infeasible, "dual certificate violated (internal)");
      const double rhs_c = h_list[hi](d0);
      out.push_back(make_report(
          "cost_contraction(t=" + fmt_short(t) + ";h=" + std::to_string(hi) + ")", fmt_short(t),
          lp.cost, rhs_c, 2.0 * h));
    }
  }
  return out;
}

double fit_log_slope(const std::vector<double>& t, const std::vector<double>& w) {
  if (t.size() != w.size() || t.size() < 2)
    throw Error(errc::size_mismatch, "need matching lists with at least two samples");
  double mt = 0.0, my = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += std::log(w[i]);
  }
  mt /= static_cast<double>(t.size());
  my /= static_cast<double>(t.size());
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - mt) * (std::log(w[i]) - my);
    sxx += (t[i] - mt) * (t[i] - mt);
  }
  return sxy / sxx;
}

std::vector<CheckReport> evi_check(const SpectralFactorization& sf, const ReversibleGenerator& gen,
                                   double K, const DiscreteMeasure& mu0, const DiscreteMeasure& nu,
                                   const std::vector<double>& t_list, double delta) {
  if (t_list.empty()) return {};
  if (!(delta > 0.0)) throw Error(errc::step_too_large, "finite-difference step must be positive");
  const double t_min = *std::min_element(t_list.begin(), t_list.end());
  if (t_min < 0.0) throw Error(errc::negative_time, "negative time in t_list");
  if (delta > t_min / 2.0)
    throw Error(errc::step_too_large, "delta exceeds half the smallest time");
  const double h = grid_spacing(gen);
  const double ent_nu = entropy(nu, gen.measure);
  const double tol = 10.0 * delta + 5.0 * h;

  std::vector<CheckReport> out;
  for (double t : t_list) {
    const DiscreteMeasure mu_minus = flow_measure(sf, gen, mu0, t - delta);
    const DiscreteMeasure mu_mid = flow_measure(sf, gen, mu0, t);
    const DiscreteMeasure mu_plus = flow_measure(sf, gen, mu0, t + delta);
    const double w_minus = wasserstein_1d(mu_minus, nu, 2.0);
    const double w_mid = wasserstein_1d(mu_mid, nu, 2.0);
    const double w_plus = wasserstein_1d(mu_plus, nu, 2.0);
    const double derivative = (0.5 * w_plus * w_plus - 0.5 * w_minus * w_minus) / (2.0 * delta);
    const double lhs = derivative + 0.5 * K * w_mid * w_mid;
    const double rhs = ent_nu - entropy(mu_mid, gen.measure);
    out.push_back(make_report("evi(t=" + fmt_short(t) + ")", fmt_short(t), lhs, rhs, tol));
  }
  return out;
}

std::vector<CheckReport> displacement_convexity_check(const DiscreteMeasure& mu0,
                                                      const DiscreteMeasure& mu1,
                                                      const ReversibleGenerator& gen, double K,
                                                      const std::vector<double>& t_list) {
  if (!gen.space.positions)
    throw Error(errc::degenerate_grid, "displacement interpolation needs a grid generator");
  const auto& pos = *gen.space.positions;
  const double h = grid_spacing(gen);
  const double w01 = wasserstein_1d(mu0, mu1, 2.0);
  const double ent0 = entropy(mu0, gen.measure);
  const double ent1 = entropy(mu1, gen.measure);
  const auto chunks = monotone_coupling(mu0, mu1);

  std::vector<CheckReport> out;
  for (double t : t_list) {
    if (t < 0.0 || t > 1.0) throw Error(errc::parse_error, "interpolation time outside [0,1]");
    // quantile interpolation: positions (1-t)·from + t·to, chunk masses
    std::vector<double> ipos, imass;
    for (const auto& c : chunks) {
      ipos.push_back((1.0 - t) * c.from + t * c.to);
      imass.push_back(c.mass);
    }
    const DiscreteMeasure mu_t = make_discrete_measure(ipos, imass);

    // geodesic identity
    const double w0t = wasserstein_1d(mu0, mu_t, 2.0);
    out.push_back(make_report("cd_geodesic(t=" + fmt_short(t) + ")", fmt_short(t),
                              std::abs(w0t - t * w01), 0.0, 2.0 * h));

    // entropy needs a density on the grid: mass-preserving nearest-node rebin
    std::vector<double> w(pos.size(), 0.0);
    for (size_t k = 0; k < mu_t.support.size(); ++k) {
      const auto it = std::lower_bound(pos.begin(), pos.end(), mu_t.support[k]);
      size_t idx = static_cast<size_t>(it - pos.begin());
      if (idx == pos.size()) idx = pos.size() - 1;
      else if (idx > 0 && mu_t.support[k] - pos[idx - 1] < pos[idx] - mu_t.support[k]) --idx;
      w[idx] += mu_t.weights[k];
    }
    const DiscreteMeasure rebinned = make_discrete_measure(pos, std::move(w));
    const double lhs = entropy(rebinned, gen.measure);
    const double rhs = (1.0 - t) * ent0 + t * ent1 - 0.5 * K * t * (1.0 - t) * w01 * w01;
    out.push_back(make_report("cd_entropy(t=" + fmt_short(t) + ")", fmt_short(t), lhs, rhs, 5.0 * h));
  }
  return out;
}

} // namespace g2lab
