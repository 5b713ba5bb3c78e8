#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "g2lab/errors.hpp"

namespace g2lab {

// Real polynomial in one variable, coefficients in ascending degree.
// Trailing zeros are trimmed; the zero polynomial has no coefficients.
// Degrees are capped to keep verification arithmetic well conditioned.
class UnivariatePoly {
 public:
  static constexpr int kMaxDegree = 16;

  UnivariatePoly() = default;
  explicit UnivariatePoly(std::vector<double> coeffs);

  static UnivariatePoly constant(double c) { return UnivariatePoly({c}); }
  static UnivariatePoly variable() { return UnivariatePoly({0.0, 1.0}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coefficients() const { return c_; }
  double coefficient(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(k)] : 0.0;
  }

  double eval(double x) const;
  UnivariatePoly derivative() const;
  double max_abs_coefficient() const;

  UnivariatePoly operator+(const UnivariatePoly& o) const;
  UnivariatePoly operator-(const UnivariatePoly& o) const;
  UnivariatePoly operator*(const UnivariatePoly& o) const;
  UnivariatePoly operator*(double s) const;
  UnivariatePoly operator-() const { return (*this) * -1.0; }

  // all real roots in [lo, hi], ascending (derivative-recursion bisection)
  std::vector<double> real_roots(double lo, double hi) const;

 private:
  std::vector<double> c_;
};

inline UnivariatePoly operator*(double s, const UnivariatePoly& p) { return p * s; }

// `1 + 0.5*x^2 - x` ; whitespace-insensitive, `^` for powers, `*` optional
UnivariatePoly parse_poly(std::string_view text);

// Real polynomial in n variables, sparse exponent-tuple representation.
class MultivariatePoly {
 public:
  static constexpr int kMaxTotalDegree = 8;

  explicit MultivariatePoly(int nvars) : nvars_(nvars) {}

  static MultivariatePoly variable(int nvars, int index);
  static MultivariatePoly constant(int nvars, double c);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::vector<int>, double>& terms() const { return terms_; }

  void add_term(const std::vector<int>& exponents, double coeff);

  double eval(const std::vector<double>& point) const;
  double eval_at_origin() const;
  MultivariatePoly partial(int index) const;

  // substitute y_i := args[i](x)
  UnivariatePoly compose(const std::vector<UnivariatePoly>& args) const;

  MultivariatePoly operator+(const MultivariatePoly& o) const;
  MultivariatePoly operator-(const MultivariatePoly& o) const;
  MultivariatePoly operator*(const MultivariatePoly& o) const;
  MultivariatePoly operator*(double s) const;

 private:
  int nvars_;
  std::map<std::vector<int>, double> terms_;
};

// `2*y1^2*y3 - y2` with 1-based variables y1..yn
MultivariatePoly parse_multipoly(std::string_view text, int nvars);

} // namespace g2lab
