#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "g2lab/rng.hpp"
#include "g2lab/transport.hpp"

using namespace g2lab;

namespace {

DiscreteMeasure dirac(double x) { return make_discrete_measure({x}, {1.0}); }

DiscreteMeasure random_measure(Rng& rng, int max_points) {
  const int n = 2 + rng.uniform_int(0, max_points - 2);
  std::vector<double> xs, ws;
  double x = rng.uniform(-5.0, 0.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    x += rng.uniform(0.05, 1.0);
    xs.push_back(x);
    const double w = rng.uniform(0.05, 1.0);
    ws.push_back(w);
    total += w;
  }
  for (double& w : ws) w /= total;
  return make_discrete_measure(std::move(xs), std::move(ws));
}

} // namespace

TEST_CASE("measure construction: validation and tie merging") {
  CHECK_THROWS_AS(make_discrete_measure({0.0, 1.0}, {0.6, 0.6}), Error);
  CHECK_THROWS_AS(make_discrete_measure({0.0, 1.0}, {-0.2, 1.2}), Error);
  const auto merged = make_discrete_measure({1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
  REQUIRE(merged.support.size() == 2);
  CHECK(merged.support[0] == 0.0);
  CHECK(merged.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("quantile wasserstein on pinned examples") {
  CHECK(wasserstein_1d(dirac(0.0), dirac(1.0), 1.0) == doctest::Approx(1.0));
  CHECK(wasserstein_1d(dirac(0.0), dirac(1.0), 2.0) == doctest::Approx(1.0));
  CHECK(wasserstein_1d(dirac(0.0), dirac(1.0), kInfiniteP) == doctest::Approx(1.0));

  const auto u01 = make_discrete_measure({0.0, 1.0}, {0.5, 0.5});
  const auto u23 = make_discrete_measure({2.0, 3.0}, {0.5, 0.5});
  for (double p : {1.0, 2.0, 3.0, kInfiniteP})
    CHECK(wasserstein_1d(u01, u23, p) == doctest::Approx(2.0));

  const auto split = make_discrete_measure({0.0, 2.0}, {0.5, 0.5});
  for (double p : {1.0, 2.0, 3.0, kInfiniteP})
    CHECK(wasserstein_1d(split, dirac(1.0), p) == doctest::Approx(1.0));
}

TEST_CASE("lp transport matches the quantile solver on powers") {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const auto mu = random_measure(rng, 30);
    const auto nu = random_measure(rng, 30);
    const Matrix d = distance_matrix_1d(mu, nu);
    for (double p : {1.0, 2.0, 3.0}) {
      const LpResult lp = transport_cost_lp(mu, nu, CostFunction::power(p), d);
      const double wp = wasserstein_1d(mu, nu, p);
      CHECK(lp.cost == doctest::Approx(std::pow(wp, p)).epsilon(1e-9));

      // dual certificate and marginals on every solve
      CHECK(lp.max_dual_violation <= 1e-9);
      std::vector<double> row(mu.support.size(), 0.0), col(nu.support.size(), 0.0);
      for (const auto& e : lp.plan.entries) {
        row[static_cast<size_t>(e.i)] += e.mass;
        col[static_cast<size_t>(e.j)] += e.mass;
        CHECK(e.mass > 0.0);
      }
      for (size_t i = 0; i < row.size(); ++i)
        CHECK(std::abs(row[i] - mu.weights[i]) <= 1e-9);
      for (size_t j = 0; j < col.size(); ++j)
        CHECK(std::abs(col[j] - nu.weights[j]) <= 1e-9);
      CHECK(static_cast<int>(lp.plan.entries.size()) <=
            static_cast<int>(mu.support.size() + nu.support.size()) - 1);
    }
  }
}

TEST_CASE("lp pinned examples") {
  const auto split = make_discrete_measure({0.0, 2.0}, {0.5, 0.5});
  const auto d1 = dirac(1.0);
  const LpResult linear =
      transport_cost_lp(split, d1, CostFunction::power(1.0), distance_matrix_1d(split, d1));
  CHECK(linear.cost == doctest::Approx(1.0));

  // identical measures, zero cost, identity-like plan
  const LpResult self =
      transport_cost_lp(split, split, CostFunction::power(2.0), distance_matrix_1d(split, split));
  CHECK(self.cost == doctest::Approx(0.0));

  // unique coupling from a dirac: cost is the mean of h(d)
  const auto u13 = make_discrete_measure({1.0, 3.0}, {0.5, 0.5});
  const LpResult sq =
      transport_cost_lp(dirac(0.0), u13, CostFunction::power(2.0), distance_matrix_1d(dirac(0.0), u13));
  CHECK(sq.cost == doctest::Approx(5.0));
}

TEST_CASE("wp monotone in p and triangle inequality") {
  Rng rng(7);
  for (int rep = 0; rep < 30; ++rep) {
    const auto a = random_measure(rng, 12);
    const auto b = random_measure(rng, 12);
    const auto c = random_measure(rng, 12);
    const double w1 = wasserstein_1d(a, b, 1.0);
    const double w2 = wasserstein_1d(a, b, 2.0);
    const double w3 = wasserstein_1d(a, b, 3.0);
    const double wi = wasserstein_1d(a, b, kInfiniteP);
    CHECK(w1 <= w2 + 1e-9);
    CHECK(w2 <= w3 + 1e-9);
    CHECK(w3 <= wi + 1e-9);
    for (double p : {1.0, 2.0})
      CHECK(wasserstein_1d(a, c, p) <=
            wasserstein_1d(a, b, p) + wasserstein_1d(b, c, p) + 1e-9);
    CHECK(wasserstein_1d(a, b, 2.0) == doctest::Approx(wasserstein_1d(b, a, 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("unsorted supports are rejected by the raw struct") {
  DiscreteMeasure bad;
  bad.support = {1.0, 0.0};
  bad.weights = {0.5, 0.5};
  CHECK_THROWS_AS(wasserstein_1d(bad, dirac(0.0), 2.0), Error);
}

TEST_CASE("custom piecewise-linear costs") {
  const CostFunction capped = CostFunction::custom({{0.0, 0.0}, {1.0, 1.0}});
  CHECK(capped(0.5) == doctest::Approx(0.5));
  CHECK(capped(1.0) == doctest::Approx(1.0));
  CHECK(capped(7.0) == doctest::Approx(1.0)); // flat beyond the last breakpoint
  const CostFunction scaled = capped.perturbed(2.0);
  CHECK(scaled(0.4) == doctest::Approx(0.8));
  CHECK(scaled(3.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(CostFunction::custom({{0.0, 1.0}, {1.0, 0.5}}), Error);
  CHECK_THROWS_AS(CostFunction::power(0.5), Error);
}

TEST_CASE("heat flow of a dirac") {
  Matrix rates(2, 2);
  rates(0, 0) = -1.0;
  rates(0, 1) = 1.0;
  rates(1, 0) = 1.0;
  rates(1, 1) = -1.0;
  const auto gen = build_chain(make_state_space(2), make_measure({0.5, 0.5}), rates);
  const auto sf = factorize(gen);

  const DiscreteMeasure at0 = heat_flow_dirac(sf, 0, 0.0);
  CHECK(at0.weights[0] == doctest::Approx(1.0));
  CHECK(at0.weights[1] == doctest::Approx(0.0));

  const DiscreteMeasure rho = heat_flow_dirac(sf, 0, std::log(2.0) / 2.0);
  CHECK(rho.weights[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(rho.weights[1] == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(heat_flow_dirac(sf, 0, -1.0), Error);
  CHECK_THROWS_AS(heat_flow_dirac(sf, 5, 1.0), Error);
}

TEST_CASE("ou heat kernel mean and variance match the closed forms") {
  const auto gen = build_weighted_grid(-5.0, 5.0, 201, parse_poly("0.5*x^2"));
  const auto sf = factorize(gen);
  const auto& xs = *gen.space.positions;
  int start = 0;
  for (size_t i = 0; i < xs.size(); ++i)
    if (std::abs(xs[i] - 1.0) < std::abs(xs[static_cast<size_t>(start)] - 1.0))
      start = static_cast<int>(i);

  for (double t : {0.1, 0.5, 1.0}) {
    double clamped = 0.0;
    const DiscreteMeasure rho = heat_flow_dirac(sf, start, t, &clamped);
    CHECK(clamped <= 1e-8);
    const double mean_ref = xs[static_cast<size_t>(start)] * std::exp(-t);
    const double var_ref = 1.0 - std::exp(-2.0 * t);
    CHECK(std::abs(measure_mean(rho) - mean_ref) <= 0.02 * std::max(1.0, std::abs(mean_ref)));
    CHECK(std::abs(measure_variance(rho) - var_ref) <= 0.02 * std::max(1.0, var_ref));
  }
}

TEST_CASE("entropy basics") {
  const Measure m{{0.5, 0.5}};
  CHECK(entropy(make_discrete_measure({0.0, 1.0}, {0.5, 0.5}), m) == doctest::Approx(0.0));
  CHECK(entropy(make_discrete_measure({0.0, 1.0}, {1.0, 0.0}), m) ==
        doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(entropy(make_discrete_measure({0.0}, {1.0}), m), Error);
}

TEST_CASE("decay-rate fit recovers a pure exponential") {
  std::vector<double> t{0.1, 0.3, 0.5, 0.9};
  std::vector<double> w;
  for (double ti : t) w.push_back(3.0 * std::exp(-1.7 * ti));
  CHECK(fit_log_slope(t, w) == doctest::Approx(-1.7).epsilon(1e-12));
}

TEST_CASE("evi: stationary start stays flat, step validation") {
  const auto gen = build_weighted_grid(-4.0, 4.0, 81, parse_poly("0.5*x^2"));
  const auto sf = factorize(gen);
  const double total = gen.measure.total();
  std::vector<double> w(gen.measure.weights);
  for (double& wi : w) wi /= total;
  const auto nu = make_discrete_measure(*gen.space.positions, w);

  // mu0 = nu: the flow is constant, both sides vanish within the tolerance
  const auto rows = evi_check(sf, gen, 1.0, nu, nu, {0.2, 0.5}, 0.05);
  for (const auto& r : rows) {
    CHECK(r.pass);
    CHECK(std::abs(r.lhs) <= r.tolerance);
    CHECK(std::abs(r.rhs) <= 1e-9);
  }

  CHECK_THROWS_AS(evi_check(sf, gen, 1.0, nu, nu, {0.2}, 0.2), Error); // delta too large
}

TEST_CASE("displacement interpolation: identical endpoints and classical case") {
  const auto gen = build_weighted_grid(0.0, 1.0, 51, UnivariatePoly());
  const auto& xs = *gen.space.positions;

  auto bump = [&](double c, double s) {
    std::vector<double> w(xs.size(), 0.0);
    double total = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
      const double z = (xs[i] - c) / s;
      w[i] = std::exp(-0.5 * z * z);
      total += w[i];
    }
    for (double& wi : w) wi /= total;
    return make_discrete_measure(xs, std::move(w));
  };

  const auto mu = bump(0.3, 0.08);

  // identical endpoints: interpolant equals the endpoint, zero slack
  for (const auto& r : displacement_convexity_check(mu, mu, gen, 0.0, {0.5})) CHECK(r.pass);

  // flat potential on [0,1]: classical displacement convexity of the entropy
  const auto nu = bump(0.7, 0.08);
  const auto rows = displacement_convexity_check(mu, nu, gen, 0.0, {0.25, 0.5, 0.75});
  for (const auto& r : rows) CHECK(r.pass);
}

TEST_CASE("brute-force displacement convexity at the midpoint") {
  // K = 0, uniform reference: Ent(mu_t) <= (1-t)Ent0 + tEnt1 must hold with
  // genuine slack for separated bumps
  const auto gen = build_weighted_grid(0.0, 1.0, 101, UnivariatePoly());
  const auto& xs = *gen.space.positions;
  std::vector<double> w0(xs.size(), 0.0), w1(xs.size(), 0.0);
  double t0 = 0.0, t1 = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= 0.05 && xs[i] <= 0.25) {
      w0[i] = 1.0;
      t0 += 1.0;
    }
    if (xs[i] >= 0.65 && xs[i] <= 0.95) {
      w1[i] = 1.0;
      t1 += 1.0;
    }
  }
  for (double& w : w0) w /= t0;
  for (double& w : w1) w /= t1;
  const auto rows = displacement_convexity_check(make_discrete_measure(xs, w0),
                                                 make_discrete_measure(xs, w1), gen, 0.0, {0.5});
  for (const auto& r : rows) CHECK(r.pass);
}
