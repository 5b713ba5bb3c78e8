#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "g2lab/gamma.hpp"
#include "g2lab/rng.hpp"

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
      const double c = rng.uniform() < 0.6 ? rng.uniform(0.1, 2.0) : 0.0;
      rates(i, j) = c / m[static_cast<size_t>(i)];
      rates(j, i) = c / m[static_cast<size_t>(j)];
    }
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

Field random_field(Rng& rng, int n) {
  Field f(n, 0.0);
  for (int i = 0; i < n; ++i) f[i] = rng.normal();
  return f;
}

// independent oracle: Γ(f,g)(x) = ½ Σ_j L_xj (f_j - f_x)(g_j - g_x)
double gamma_difference_form(const ReversibleGenerator& gen, const Field& f, const Field& g,
                             int x) {
  double s = 0.0;
  for (int j = 0; j < gen.size(); ++j)
    if (j != x) s += gen.rates(x, j) * (f[j] - f[x]) * (g[j] - g[x]);
  return 0.5 * s;
}

} // namespace

TEST_CASE("two-point carre du champ") {
  const auto gen = two_point();
  const Field f({0.0, 1.0});
  const Field gf = gamma(gen, f);
  CHECK(gf[0] == doctest::Approx(0.5));
  CHECK(gf[1] == doctest::Approx(0.5));

  const Field g2 = gamma2(gen, f);
  CHECK(g2[0] == doctest::Approx(1.0));
  CHECK(g2[1] == doctest::Approx(1.0));
  // Γ₂ = 2Γ pointwise on the two-point chain
  CHECK(g2[0] == doctest::Approx(2.0 * gf[0]));
  CHECK(g2[1] == doctest::Approx(2.0 * gf[1]));
}

TEST_CASE("constants are annihilated") {
  const auto gen = three_path();
  Rng rng(1);
  const Field c(3, 4.0);
  for (double v : gamma(gen, c, random_field(rng, 3)).values) CHECK(v == doctest::Approx(0.0));
  for (double v : gamma2(gen, c).values) CHECK(v == doctest::Approx(0.0));
  CHECK(gamma2_weak(gen, c, Field({1.0, 2.0, 0.5})) == doctest::Approx(0.0));
  for (double v : h_operator(gen, c, Field({0.0, 1.0, 4.0}), Field({1.0, 0.0, 2.0})).values)
    CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("three-point gamma matches the hand stencil") {
  const auto gen = three_path();
  const Field f({0.0, 1.0, 4.0});
  const Field gf = gamma(gen, f);
  CHECK(gf[0] == doctest::Approx(0.5));
  CHECK(gf[1] == doctest::Approx(5.0));
  CHECK(gf[2] == doctest::Approx(4.5));
}

TEST_CASE("gamma agrees with the difference-form oracle on random chains") {
  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto gen = random_chain(rng, 5 + trial);
    for (int rep = 0; rep < 20; ++rep) {
      const Field f = random_field(rng, gen.size());
      const Field g = random_field(rng, gen.size());
      const Field gv = gamma(gen, f, g);
      for (int x = 0; x < gen.size(); ++x) {
        CHECK(gv[x] == doctest::Approx(gamma_difference_form(gen, f, g, x)).epsilon(1e-11));
        CHECK(gamma_at(gen, f, g, x) == doctest::Approx(gv[x]).epsilon(1e-12));
      }
      // nonnegativity of Γ(f)
      for (double v : gamma(gen, f).values) CHECK(v >= -1e-12);
    }
  }
}

TEST_CASE("gamma2 polarization and single-state evaluation") {
  Rng rng(23);
  const auto gen = random_chain(rng, 7);
  for (int rep = 0; rep < 100; ++rep) {
    const Field f = random_field(rng, 7);
    const Field g = random_field(rng, 7);
    Field sum(7, 0.0), dif(7, 0.0);
    for (int i = 0; i < 7; ++i) {
      sum[i] = f[i] + g[i];
      dif[i] = f[i] - g[i];
    }
    const Field lhs = gamma2(gen, f, g);
    const Field a = gamma2(gen, sum);
    const Field b = gamma2(gen, dif);
    for (int i = 0; i < 7; ++i) {
      CHECK(lhs[i] == doctest::Approx(0.25 * a[i] - 0.25 * b[i]).epsilon(1e-10));
      CHECK(gamma2_at(gen, f, g, i) == doctest::Approx(lhs[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("weak form equals the strong pairing") {
  Rng rng(29);
  const auto gen = random_chain(rng, 8);
  for (int rep = 0; rep < 100; ++rep) {
    const Field f = random_field(rng, 8);
    const Field phi = random_field(rng, 8);
    const double weak = gamma2_weak(gen, f, phi);
    const Field g2 = gamma2(gen, f);
    double strong = 0.0;
    for (int i = 0; i < 8; ++i) strong += g2[i] * phi[i] * gen.measure.weights[i];
    CHECK(weak == doctest::Approx(strong).epsilon(1e-10));
  }
}

TEST_CASE("two-point weak-form examples") {
  const auto gen = two_point();
  const Field f({0.0, 1.0});
  CHECK(gamma2_weak(gen, f, Field({1.0, 1.0})) == doctest::Approx(1.0));
  CHECK(gamma2_weak(gen, f, Field({1.0, 0.0})) == doctest::Approx(0.5));
}

TEST_CASE("h operator identities") {
  Rng rng(31);
  const auto gen = random_chain(rng, 6);
  for (int rep = 0; rep < 100; ++rep) {
    const Field f = random_field(rng, 6);
    const Field g = random_field(rng, 6);
    const Field h = random_field(rng, 6);

    // symmetric in the last two arguments
    const Field a = h_operator(gen, f, g, h);
    const Field b = h_operator(gen, f, h, g);
    // pair sum collapses to Γ(Γ(f,g), h)
    const Field c = h_operator(gen, g, f, h);
    const Field d = gamma(gen, gamma(gen, f, g), h);
    for (int i = 0; i < 6; ++i) {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-11));
      CHECK(a[i] + c[i] == doctest::Approx(d[i]).epsilon(1e-10));
    }
  }

  // H[f;f,f] collapses to ½ Γ(f, Γ(f))
  const Field f = random_field(rng, 6);
  const Field lhs = h_operator(gen, f, f, f);
  const Field rhs = gamma(gen, f, gamma(gen, f));
  for (int i = 0; i < 6; ++i) CHECK(lhs[i] == doctest::Approx(0.5 * rhs[i]).epsilon(1e-11));

  // two-point: Γ(f) is constant so H[f;f,f] vanishes
  const auto tp = two_point();
  for (double v : h_operator(tp, Field({0.0, 1.0}), Field({0.0, 1.0}), Field({0.0, 1.0})).values)
    CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("two-point curvature is exactly 2") {
  const auto gen = two_point();
  const CurvatureResult k0 = curvature_at(gen, 0);
  const CurvatureResult k1 = curvature_at(gen, 1);
  REQUIRE(k0.is_finite());
  REQUIRE(k1.is_finite());
  CHECK(std::abs(k0.value - 2.0) <= 1e-9);
  CHECK(std::abs(k1.value - 2.0) <= 1e-9);
  const CurvatureResult kg = curvature_global(gen);
  REQUIRE(kg.is_finite());
  CHECK(std::abs(kg.value - 2.0) <= 1e-9);
}

TEST_CASE("three-point middle state curvature is one half") {
  // with u = f0 - f1, v = f2 - f1 the forms at the middle state read
  // Γ₂ = (3/4)(u² + v²) + uv and Γ = (u² + v²)/2, minimized at u = -v
  const auto gen = three_path();
  const CurvatureResult k = curvature_at(gen, 1);
  REQUIRE(k.is_finite());
  CHECK(k.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("rate scaling scales curvature linearly") {
  Rng rng(37);
  const auto gen = random_chain(rng, 6);
  const double c = 3.0;
  Matrix scaled = gen.rates;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) scaled(i, j) *= c;
  const auto gen_scaled = build_chain(gen.space, gen.measure, scaled);
  const CurvatureResult k = curvature_global(gen);
  const CurvatureResult ks = curvature_global(gen_scaled);
  REQUIRE(k.is_finite());
  REQUIRE(ks.is_finite());
  CHECK(ks.value == doctest::Approx(c * k.value).epsilon(1e-7));
}

TEST_CASE("pencil curvature matches the pointwise defect on random fields") {
  Rng rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const auto gen = random_chain(rng, 5 + trial);
    const CurvatureResult kg = curvature_global(gen);
    REQUIRE(kg.is_finite());
    // Γ₂(f) - K* Γ(f) >= o(1) pointwise for every f
    for (int rep = 0; rep < 200; ++rep) {
      const Field f = random_field(rng, gen.size());
      const Field g2 = gamma2(gen, f);
      const Field gf = gamma(gen, f);
      for (int x = 0; x < gen.size(); ++x) {
        const double scale = std::max({1.0, std::abs(g2[x]), std::abs(gf[x])});
        CHECK(g2[x] - kg.value * gf[x] >= -1e-8 * scale);
      }
    }
  }
}

TEST_CASE("weak-form certificate at the certified curvature") {
  Rng rng(47);
  const auto gen = random_chain(rng, 6);
  const CurvatureResult kg = curvature_global(gen);
  REQUIRE(kg.is_finite());
  for (int a = 0; a < 200; ++a) {
    const Field f = random_field(rng, 6);
    const Field gf = gamma(gen, f);
    for (int b = 0; b < 20; ++b) {
      Field phi(6, 0.0);
      for (int i = 0; i < 6; ++i) phi[i] = rng.uniform();
      const double weak = gamma2_weak(gen, f, phi);
      double mass = 0.0;
      for (int i = 0; i < 6; ++i) mass += gen.measure.weights[i] * gf[i] * phi[i];
      const double scale = std::max({1.0, std::abs(weak), std::abs(kg.value * mass)});
      CHECK(weak >= kg.value * mass - 1e-8 * scale);
    }
  }
}

TEST_CASE("report rows serialize to csv") {
  const auto gen = two_point();
  std::vector<CheckReport> rows{lapmeas_check(gen, Field({0.0, 1.0}), Field({-1.0, 1.0}))};
  std::ostringstream os;
  write_reports_csv(os, rows);
  const std::string text = os.str();
  CHECK(text.rfind("name,state_or_time,lhs,rhs,slack,tolerance,pass\n", 0) == 0);
  CHECK(text.find("lapmeas_energy,-,0.5,0.5,0,") != std::string::npos);
  CHECK(text.find(",true\n") != std::string::npos);
}

TEST_CASE("quadratic form pair reproduces the bilinear forms") {
  Rng rng(43);
  const auto gen = random_chain(rng, 6);
  const QuadraticFormPair qp = quadratic_forms_at(gen, 2);
  for (int rep = 0; rep < 25; ++rep) {
    const Field f = random_field(rng, 6);
    double qa = 0.0, qb = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        qa += f[i] * qp.a(i, j) * f[j];
        qb += f[i] * qp.b(i, j) * f[j];
      }
    CHECK(qa == doctest::Approx(gamma2(gen, f)[2]).epsilon(1e-9));
    CHECK(qb == doctest::Approx(gamma(gen, f)[2]).epsilon(1e-9));
  }
  // B is positive semidefinite
  CHECK(jacobi_lambda_min(qp.b) >= -1e-10);
}

TEST_CASE("lapmeas examples") {
  const auto gen = two_point();

  // constants with g = 0
  const CheckReport trivial = lapmeas_check(gen, Field({2.0, 2.0}), Field({0.0, 0.0}));
  CHECK(trivial.pass);
  CHECK(trivial.lhs == doctest::Approx(0.0));

  // equality case
  const CheckReport eq = lapmeas_check(gen, Field({0.0, 1.0}), Field({-1.0, 1.0}));
  CHECK(eq.pass);
  CHECK(eq.lhs == doctest::Approx(0.5));
  CHECK(eq.rhs == doctest::Approx(0.5));

  // premise violation: Lu + g = (-1, -1)
  CHECK_THROWS_AS(lapmeas_check(gen, Field({0.0, 1.0}), Field({-2.0, 0.0})), Error);
}

TEST_CASE("isolated-state forms give the infinite sentinel") {
  // two blocks: state 2 disconnected
  Matrix rates(3, 3, 0.0);
  rates(0, 0) = -1.0;
  rates(0, 1) = 1.0;
  rates(1, 0) = 1.0;
  rates(1, 1) = -1.0;
  const auto gen = build_chain(make_state_space(3), make_measure({1.0, 1.0, 1.0}), rates);
  const CurvatureResult k = curvature_at(gen, 2);
  CHECK(k.kind == CurvatureKind::plus_infinity);
  CHECK(k.to_string() == "inf");
}
