#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "g2lab/poly.hpp"

namespace g2lab {

// Line-oriented `key = value` configuration inside `[section]` headers.
struct ExperimentConfig {
  // [space]
  std::string space_kind = "grid"; // chain | grid
  double a = -5.0, b = 5.0;
  int n = 201;
  UnivariatePoly V = parse_poly("0.5*x^2");
  std::string rates_file; // required for kind = chain

  // [curvature]
  bool k_auto = true;
  double K = 0.0;

  // [times]
  std::vector<double> t_list{0.1, 0.5, 1.0};

  // [exponents]
  std::vector<double> alpha_list{0.5, 0.75, 1.0};
  std::vector<double> p_list; // defaulted in the constructor (contains inf)

  // [transport]
  double x = -1.0, y = 1.0;
  std::vector<double> interp_t_list{0.25, 0.5, 0.75};

  // [evi]
  double delta = 0.01;
  std::string mu0_spec = "gaussian:-2,0.8";

  // [run]
  std::vector<std::string> suites{"all"};
  std::uint64_t seed = 42;
  std::string out_dir = "g2lab_out";

  ExperimentConfig();

  bool wants(const std::string& suite) const;
};

// Both throw Error(errc::config_parse) with the offending field named.
ExperimentConfig parse_config(std::istream& is, const std::string& base_dir = ".");
ExperimentConfig parse_config_file(const std::string& path);

} // namespace g2lab
