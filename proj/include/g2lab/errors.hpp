#pragma once

#include <stdexcept>
#include <string>

namespace g2lab {

enum class errc {
  // construction / validation
  size_mismatch,
  negative_rate,
  row_sum_violation,
  detailed_balance_violation,
  nonpositive_mass,
  degenerate_grid,
  overflow,
  // gamma calculus
  indefinite_gamma,
  premise_violation,
  // polynomials
  degree_overflow,
  parse_error,
  nonzero_at_origin,
  curvature_premise_violation,
  // semigroup
  eigensolver_no_convergence,
  negative_time,
  nonpositive_epsilon,
  alpha_out_of_range,
  k_exceeds_curvature,
  // transport
  unsorted_support,
  infeasible,
  size_overflow,
  support_mismatch,
  excess_clamp,
  step_too_large,
  // cli
  config_parse,
  malformed_report,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

} // namespace g2lab
