#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "g2lab/rng.hpp"
#include "g2lab/space.hpp"

using namespace g2lab;

namespace {

ReversibleGenerator two_point() {
  Matrix rates(2, 2);
  rates(0, 0) = -1.0;
  rates(0, 1) = 1.0;
  rates(1, 0) = 1.0;
  rates(1, 1) = -1.0;
  return build_chain(make_state_space(2), make_measure({0.5, 0.5}), rates);
}

ReversibleGenerator three_path() {
  Matrix rates(3, 3, 0.0);
  rates(0, 0) = -1.0;
  rates(0, 1) = 1.0;
  rates(1, 0) = 1.0;
  rates(1, 1) = -2.0;
  rates(1, 2) = 1.0;
  rates(2, 1) = 1.0;
  rates(2, 2) = -1.0;
  return build_chain(make_state_space(3), make_measure({1.0, 1.0, 1.0}), rates);
}

ReversibleGenerator random_chain(Rng& rng, int n) {
  std::vector<double> m(static_cast<size_t>(n));
  for (double& w : m) w = std::exp(rng.uniform(-1.0, 1.0));
  Matrix rates(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = rng.uniform() < 0.6 ? rng.uniform(0.1, 2.0) : 0.0; // symmetric conductance
      rates(i, j) = c / m[static_cast<size_t>(i)];
      rates(j, i) = c / m[static_cast<size_t>(j)];
    }
  // keep it connected
  for (int i = 0; i + 1 < n; ++i)
    if (rates(i, i + 1) == 0.0) {
      rates(i, i + 1) = 0.5 / m[static_cast<size_t>(i)];
      rates(i + 1, i) = 0.5 / m[static_cast<size_t>(i + 1)];
    }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += rates(i, j);
    rates(i, i) = -off;
  }
  return build_chain(make_state_space(n), make_measure(std::move(m)), rates);
}

} // namespace

TEST_CASE("two-point chain validates") {
  const auto gen = two_point();
  CHECK(gen.size() == 2);
}

TEST_CASE("detailed balance violations are rejected") {
  Matrix rates(2, 2);
  rates(0, 0) = -1.0;
  rates(0, 1) = 1.0;
  rates(1, 0) = 2.0;
  rates(1, 1) = -2.0;
  CHECK_THROWS_AS(build_chain(make_state_space(2), make_measure({0.5, 0.5}), rates), Error);
  try {
    build_chain(make_state_space(2), make_measure({0.5, 0.5}), rates);
  } catch (const Error& e) {
    CHECK(e.code() == errc::detailed_balance_violation);
  }
}

TEST_CASE("row sums and signs are validated") {
  Matrix bad(2, 2);
  bad(0, 0) = -1.0;
  bad(0, 1) = 1.5;
  bad(1, 0) = 1.5;
  bad(1, 1) = -1.5;
  CHECK_THROWS_AS(build_chain(make_state_space(2), make_measure({0.5, 0.5}), bad), Error);

  Matrix neg(2, 2);
  neg(0, 0) = 1.0;
  neg(0, 1) = -1.0;
  neg(1, 0) = -1.0;
  neg(1, 1) = 1.0;
  CHECK_THROWS_AS(build_chain(make_state_space(2), make_measure({0.5, 0.5}), neg), Error);

  CHECK_THROWS_AS(make_measure({1.0, 0.0}), Error);
}

TEST_CASE("three-point path example") {
  const auto gen = three_path();
  const Field lf = apply(gen, Field({0.0, 1.0, 4.0}));
  CHECK(lf[0] == doctest::Approx(1.0));
  CHECK(lf[1] == doctest::Approx(2.0));
  CHECK(lf[2] == doctest::Approx(-3.0));
}

TEST_CASE("generator kills constants and preserves mass") {
  const auto gen = two_point();
  const Field lc = apply(gen, Field({3.0, 3.0}));
  CHECK(lc[0] == doctest::Approx(0.0));
  CHECK(lc[1] == doctest::Approx(0.0));
  const Field lf = apply(gen, Field({0.0, 1.0}));
  CHECK(lf[0] == doctest::Approx(1.0));
  CHECK(lf[1] == doctest::Approx(-1.0));
  CHECK(integrate(gen, lf) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("flat-potential grid reproduces the unit path") {
  const auto gen = build_weighted_grid(0.0, 2.0, 3, UnivariatePoly());
  CHECK(gen.measure.weights[0] == doctest::Approx(1.0));
  CHECK(gen.measure.weights[1] == doctest::Approx(1.0));
  CHECK(gen.rates(0, 1) == doctest::Approx(1.0));
  CHECK(gen.rates(1, 1) == doctest::Approx(-2.0));
  CHECK(gen.rates(2, 1) == doctest::Approx(1.0));
  CHECK(gen.rates(0, 2) == 0.0);

  // constant potential shifts cancel
  const auto shifted = build_weighted_grid(0.0, 2.0, 3, UnivariatePoly::constant(3.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(shifted.rates(i, j) == doctest::Approx(gen.rates(i, j)));
}

TEST_CASE("grid rejections") {
  CHECK_THROWS_AS(build_weighted_grid(0.0, 2.0, 2, UnivariatePoly()), Error);
  CHECK_THROWS_AS(build_weighted_grid(2.0, 0.0, 5, UnivariatePoly()), Error);
  CHECK_THROWS_AS(build_weighted_grid(0.0, 2.0, 5, UnivariatePoly::constant(1e6)), Error);
}

TEST_CASE("grid converges to the continuum operator") {
  const UnivariatePoly V = parse_poly("0.5*x^2");
  const auto coarse = build_weighted_grid(-4.0, 4.0, 101, V);
  const auto fine = build_weighted_grid(-4.0, 4.0, 201, V);
  // L f for f = x^2 should approach f'' - V' f' = 2 - 2x^2
  auto sample_error = [&](const ReversibleGenerator& gen) {
    const auto& xs = *gen.space.positions;
    Field f(gen.size(), 0.0);
    for (int i = 0; i < gen.size(); ++i) f[i] = xs[static_cast<size_t>(i)] * xs[static_cast<size_t>(i)];
    const Field lf = apply(gen, f);
    double err = 0.0;
    for (int i = 0; i < gen.size(); ++i) {
      const double x = xs[static_cast<size_t>(i)];
      if (std::abs(x) > 3.0) continue; // interior comparison
      err = std::max(err, std::abs(lf[i] - (2.0 - 2.0 * x * x)));
    }
    return err;
  };
  const double e_coarse = sample_error(coarse);
  const double e_fine = sample_error(fine);
  CHECK(e_coarse < 0.02);
  CHECK(e_fine < e_coarse);
}

TEST_CASE("random chains satisfy the structural properties") {
  Rng rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const auto gen = random_chain(rng, 4 + trial);
    const int n = gen.size();

    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += gen.rates(i, j);
      CHECK(std::abs(row) <= 1e-10);
    }
    // self-adjointness on random pairs
    for (int rep = 0; rep < 50; ++rep) {
      Field f(n, 0.0), g(n, 0.0);
      for (int i = 0; i < n; ++i) {
        f[i] = rng.normal();
        g[i] = rng.normal();
      }
      const double a = inner_m(gen, apply(gen, f), g);
      const double b = inner_m(gen, f, apply(gen, g));
      CHECK(a == doctest::Approx(b).epsilon(1e-10));
      CHECK(std::abs(integrate(gen, apply(gen, f))) <= 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("grid dirichlet energy equals the midpoint-weighted sum of squares") {
  Rng rng(9);
  const UnivariatePoly V = parse_poly("0.25*x^2 + 0.1*x^4");
  const auto gen = build_weighted_grid(-2.0, 2.0, 41, V);
  const auto& xs = *gen.space.positions;
  const double h = xs[1] - xs[0];
  for (int rep = 0; rep < 5; ++rep) {
    Field f(gen.size(), 0.0);
    for (int i = 0; i < gen.size(); ++i) f[i] = rng.normal();
    double sum = 0.0;
    for (int i = 0; i + 1 < gen.size(); ++i) {
      const double mid = 0.5 * (xs[static_cast<size_t>(i)] + xs[static_cast<size_t>(i) + 1]);
      const double w = std::exp(-V.eval(mid)) / (h * h);
      sum += w * h * (f[i + 1] - f[i]) * (f[i + 1] - f[i]);
    }
    const double energy = dirichlet_energy(gen, f);
    CHECK(energy == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("serialization round trip is extremely close") {
  Rng rng(3);
  const auto gen = random_chain(rng, 6);
  std::stringstream ss;
  save_generator(gen, ss);
  const auto back = load_generator(ss);
  REQUIRE(back.size() == gen.size());
  for (int i = 0; i < gen.size(); ++i) {
    CHECK(back.measure.weights[i] == gen.measure.weights[i]);
    for (int j = 0; j < gen.size(); ++j) CHECK(back.rates(i, j) == gen.rates(i, j));
  }

  const auto grid = build_weighted_grid(-1.0, 1.0, 9, parse_poly("x^2"));
  std::stringstream gs;
  save_generator(grid, gs);
  const auto grid_back = load_generator(gs);
  REQUIRE(grid_back.space.positions.has_value());
  for (int i = 0; i < grid.size(); ++i)
    CHECK((*grid_back.space.positions)[static_cast<size_t>(i)] ==
          (*grid.space.positions)[static_cast<size_t>(i)]);
}
