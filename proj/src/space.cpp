#include "g2lab/space.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace g2lab {

namespace {

constexpr double kRowSumTol = 1e-10;
constexpr double kBalanceTol = 1e-10;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace

StateSpace make_state_space(int n) {
  if (n < 2) throw Error(errc::degenerate_grid, "state space needs n >= 2");
  return StateSpace{n, std::nullopt};
}

StateSpace make_state_space(std::vector<double> positions) {
  const int n = static_cast<int>(positions.size());
  if (n < 2) throw Error(errc::degenerate_grid, "state space needs n >= 2");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(positions[i]))
      throw Error(errc::degenerate_grid, "non-finite position");
    if (i > 0 && positions[i] <= positions[i - 1])
      throw Error(errc::degenerate_grid, "positions must be strictly increasing");
  }
  return StateSpace{n, std::move(positions)};
}

double Measure::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

Measure make_measure(std::vector<double> weights) {
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw Error(errc::nonpositive_mass, "measure weights must be strictly positive");
  return Measure{std::move(weights)};
}

Field basis_field(int n, int i) {
  Field e(n, 0.0);
  e[i] = 1.0;
  return e;
}

ReversibleGenerator build_chain(StateSpace space, Measure measure, Matrix rates) {
  const int n = space.n;
  if (static_cast<int>(measure.weights.size()) != n)
    throw Error(errc::size_mismatch, "measure size does not match state space");
  if (rates.rows() != n || rates.cols() != n)
    throw Error(errc::size_mismatch, "rate matrix dimensions do not match state space");
  for (double w : measure.weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw Error(errc::nonpositive_mass, "nonpositive mass");

  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i != j && rates(i, j) < 0.0)
        throw Error(errc::negative_rate,
                    "negative off-diagonal rate at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      row += rates(i, j);
    }
    if (std::abs(row) > kRowSumTol)
      throw Error(errc::row_sum_violation,
                  "row " + std::to_string(i) + " sums to " + fmt17(row));
  }
  const auto& m = measure.weights;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double a = m[i] * rates(i, j);
      const double b = m[j] * rates(j, i);
      if (std::abs(a - b) > kBalanceTol * std::max(1.0, std::abs(a)))
        throw Error(errc::detailed_balance_violation,
                    "m_i L_ij asymmetry at (" + std::to_string(i) + "," + std::to_string(j) +
                        "): " + fmt17(a) + " vs " + fmt17(b));
    }
  return ReversibleGenerator{std::move(space), std::move(measure), std::move(rates)};
}

ReversibleGenerator build_weighted_grid(double a, double b, int n, const UnivariatePoly& V) {
  if (n < 3 || !(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(errc::degenerate_grid, "need a < b and n >= 3");
  const double h = (b - a) / static_cast<double>(n - 1);

  std::vector<double> x(n), m(n);
  for (int i = 0; i < n; ++i) {
    x[i] = a + h * static_cast<double>(i);
    m[i] = h * std::exp(-V.eval(x[i]));
    if (!std::isfinite(m[i]) || m[i] < std::numeric_limits<double>::min())
      throw Error(errc::overflow,
                  "exp(-V) under/overflows at x = " + fmt17(x[i]) + " (V = " + fmt17(V.eval(x[i])) + ")");
  }

  Matrix L(n, n, 0.0);
  for (int i = 0; i + 1 < n; ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    const double w = std::exp(-V.eval(mid)) / (h * h); // edge conductance
    if (!std::isfinite(w) || w < std::numeric_limits<double>::min())
      throw Error(errc::overflow, "exp(-V) under/overflows at midpoint x = " + fmt17(mid));
    const double c = w * h; // symmetric edge weight: m_i L_ij = c exactly
    L(i, i + 1) = c / m[i];
    L(i + 1, i) = c / m[i + 1];
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += L(i, j);
    L(i, i) = -off;
  }
  return ReversibleGenerator{make_state_space(std::move(x)), Measure{std::move(m)}, std::move(L)};
}

Field apply(const ReversibleGenerator& gen, const Field& f) {
  if (f.size() != gen.size()) throw Error(errc::size_mismatch, "field size does not match generator");
  return Field(matvec(gen.rates, f.values));
}

double integrate(const ReversibleGenerator& gen, const Field& f) {
  if (f.size() != gen.size()) throw Error(errc::size_mismatch, "field size does not match generator");
  double s = 0.0;
  for (int i = 0; i < gen.size(); ++i) s += gen.measure.weights[i] * f[i];
  return s;
}

double inner_m(const ReversibleGenerator& gen, const Field& f, const Field& g) {
  if (f.size() != gen.size() || g.size() != gen.size())
    throw Error(errc::size_mismatch, "field size does not match generator");
  double s = 0.0;
  for (int i = 0; i < gen.size(); ++i) s += gen.measure.weights[i] * f[i] * g[i];
  return s;
}

double dirichlet_energy(const ReversibleGenerator& gen, const Field& f) {
  return -inner_m(gen, f, apply(gen, f));
}

double grid_spacing(const ReversibleGenerator& gen) {
  if (!gen.space.positions) return 0.0;
  const auto& x = *gen.space.positions;
  double h = 0.0;
  for (size_t i = 0; i + 1 < x.size(); ++i) h = std::max(h, x[i + 1] - x[i]);
  return h;
}

void save_generator(const ReversibleGenerator& gen, std::ostream& os) {
  const int n = gen.size();
  os << n << ' ' << fmt17(gen.measure.total()) << '\n';
  for (int i = 0; i < n; ++i) {
    const double xi = gen.space.positions ? (*gen.space.positions)[i] : static_cast<double>(i);
    os << i << ' ' << fmt17(xi) << ' ' << fmt17(gen.measure.weights[i]) << '\n';
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (gen.rates(i, j) != 0.0)
        os << i << ' ' << j << ' ' << fmt17(gen.rates(i, j)) << '\n';
}

ReversibleGenerator load_generator(std::istream& is) {
  int n = 0;
  double total = 0.0;
  if (!(is >> n >> total) || n < 2) throw Error(errc::parse_error, "bad generator header");
  std::vector<double> x(n), m(n);
  for (int k = 0; k < n; ++k) {
    int i;
    double xi, mi;
    if (!(is >> i >> xi >> mi) || i < 0 || i >= n)
      throw Error(errc::parse_error, "bad state line in generator file");
    x[i] = xi;
    m[i] = mi;
  }
  Matrix L(n, n, 0.0);
  int i, j;
  double v;
  while (is >> i >> j >> v) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw Error(errc::parse_error, "rate index out of range in generator file");
    L(i, j) = v;
  }
  bool grid = false;
  for (int k = 0; k < n; ++k)
    if (x[k] != static_cast<double>(k)) grid = true;
  StateSpace space = grid ? make_state_space(std::move(x)) : make_state_space(n);
  return build_chain(std::move(space), make_measure(std::move(m)), std::move(L));
}

void save_generator_file(const ReversibleGenerator& gen, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(errc::parse_error, "cannot open " + path + " for writing");
  save_generator(gen, os);
}

ReversibleGenerator load_generator_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(errc::parse_error, "cannot open " + path);
  return load_generator(is);
}

} // namespace g2lab
