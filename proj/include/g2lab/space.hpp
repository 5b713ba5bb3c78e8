#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "g2lab/linalg.hpp"
#include "g2lab/poly.hpp"

namespace g2lab {

// Finite state space; positions are present for 1D grid discretizations
// and must be strictly increasing.
struct StateSpace {
  int n = 0;
  std::optional<std::vector<double>> positions;
};

StateSpace make_state_space(int n);
StateSpace make_state_space(std::vector<double> positions);

// Strictly positive reference measure (full support).
struct Measure {
  std::vector<double> weights;
  double total() const;
};

Measure make_measure(std::vector<double> weights);

// Real-valued function on the state space.
struct Field {
  std::vector<double> values;

  Field() = default;
  explicit Field(std::vector<double> v) : values(std::move(v)) {}
  Field(std::initializer_list<double> v) : values(v) {}
  Field(int n, double fill) : values(static_cast<size_t>(n), fill) {}

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
};

Field basis_field(int n, int i);

// Markov generator L with reversible measure m:
//   off-diagonal rates >= 0, zero row sums, m_i L_ij = m_j L_ji.
struct ReversibleGenerator {
  StateSpace space;
  Measure measure;
  Matrix rates;

  int size() const { return space.n; }
};

// Validating constructor for an explicitly given rate matrix.
ReversibleGenerator build_chain(StateSpace space, Measure measure, Matrix rates);

// Uniform-grid discretization of the weighted diffusion f'' - V' f' on [a, b]
// with reflecting boundary:
//   x_i = a + i h,  m_i = h exp(-V(x_i)),
//   edge conductance w_{i,i+1} = exp(-V(x_{i+1/2})) / h^2,
//   (L f)_i = [w_{i,i+1}(f_{i+1}-f_i) + w_{i-1,i}(f_{i-1}-f_i)] h / m_i.
// Midpoint conductances make detailed balance exact by construction.
ReversibleGenerator build_weighted_grid(double a, double b, int n, const UnivariatePoly& V);

Field apply(const ReversibleGenerator& gen, const Field& f);

double integrate(const ReversibleGenerator& gen, const Field& f);               // ∫ f dm
double inner_m(const ReversibleGenerator& gen, const Field& f, const Field& g); // ⟨f, g⟩_m
double dirichlet_energy(const ReversibleGenerator& gen, const Field& f);        // -⟨f, Lf⟩_m

double grid_spacing(const ReversibleGenerator& gen); // max spacing; 0 for abstract chains

// Plain-text serialization: `n m_total`, then `i x_i m_i` per state, then
// `i j L_ij` per nonzero rate, 17 significant digits.
void save_generator(const ReversibleGenerator& gen, std::ostream& os);
ReversibleGenerator load_generator(std::istream& is);
void save_generator_file(const ReversibleGenerator& gen, const std::string& path);
ReversibleGenerator load_generator_file(const std::string& path);

} // namespace g2lab
