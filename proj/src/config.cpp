#include "g2lab/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace g2lab {

namespace {

const std::vector<std::string> kKnownSuites = {"calculus",    "curvature", "gradient",
                                               "contraction", "evi",       "cd"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& field, const std::string& value) {
  if (value == "inf" || value == "Inf") return std::numeric_limits<double>::infinity();
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(errc::config_parse, field + ": cannot parse number '" + value + "'");
  }
}

std::vector<double> parse_list(const std::string& field, const std::string& value) {
  std::string norm = value;
  std::replace(norm.begin(), norm.end(), ',', ' ');
  std::istringstream ss(norm);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(field, tok));
  if (out.empty()) throw Error(errc::config_parse, field + ": empty list");
  return out;
}

std::vector<std::string> parse_words(const std::string& value) {
  std::string norm = value;
  std::replace(norm.begin(), norm.end(), ',', ' ');
  std::istringstream ss(norm);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.space_kind != "chain" && cfg.space_kind != "grid")
    throw Error(errc::config_parse, "space.kind: expected chain or grid, got '" + cfg.space_kind + "'");
  if (cfg.space_kind == "grid") {
    if (!(cfg.a < cfg.b)) throw Error(errc::config_parse, "space.a/space.b: need a < b");
    if (cfg.n < 3) throw Error(errc::config_parse, "space.n: need n >= 3");
  } else {
    if (cfg.rates_file.empty())
      throw Error(errc::config_parse, "space.rates_file: required for kind = chain");
    if (!std::filesystem::exists(cfg.rates_file))
      throw Error(errc::config_parse, "space.rates_file: file not found: " + cfg.rates_file);
  }

  if (cfg.t_list.empty()) throw Error(errc::config_parse, "times.t_list: empty");
  for (size_t i = 0; i < cfg.t_list.size(); ++i) {
    if (!(cfg.t_list[i] > 0.0))
      throw Error(errc::config_parse, "times.t_list: entries must be positive");
    if (i > 0 && !(cfg.t_list[i] > cfg.t_list[i - 1]))
      throw Error(errc::config_parse, "times.t_list: entries must be ascending");
  }
  for (double a : cfg.alpha_list)
    if (!(a >= 0.5 && a <= 1.0))
      throw Error(errc::config_parse,
                  "exponents.alpha_list: value " + std::to_string(a) + " outside [0.5, 1]");
  for (double p : cfg.p_list)
    if (!(p >= 1.0))
      throw Error(errc::config_parse, "exponents.p_list: values must lie in [1, inf]");
  for (double t : cfg.interp_t_list)
    if (!(t >= 0.0 && t <= 1.0))
      throw Error(errc::config_parse, "transport.interp_t_list: values must lie in [0, 1]");
  if (!(cfg.delta > 0.0)) throw Error(errc::config_parse, "evi.delta: must be positive");

  for (const auto& s : cfg.suites) {
    if (s == "all") continue;
    if (std::find(kKnownSuites.begin(), kKnownSuites.end(), s) == kKnownSuites.end())
      throw Error(errc::config_parse, "run.suites: unknown suite '" + s + "'");
  }
  const bool needs_grid = cfg.wants("contraction") || cfg.wants("evi") || cfg.wants("cd");
  if (needs_grid && cfg.space_kind != "grid")
    throw Error(errc::config_parse,
                "run.suites: contraction/evi/cd suites need a grid space");
}

} // namespace

ExperimentConfig::ExperimentConfig() {
  p_list = {1.0, 2.0, std::numeric_limits<double>::infinity()};
}

bool ExperimentConfig::wants(const std::string& suite) const {
  for (const auto& s : suites)
    if (s == "all" || s == suite) return true;
  return false;
}

ExperimentConfig parse_config(std::istream& is, const std::string& base_dir) {
  ExperimentConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error(errc::config_parse, "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(errc::config_parse, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string field = section + "." + key;

    if (section == "space") {
      if (key == "kind") cfg.space_kind = value;
      else if (key == "a") cfg.a = parse_double(field, value);
      else if (key == "b") cfg.b = parse_double(field, value);
      else if (key == "n") cfg.n = static_cast<int>(parse_double(field, value));
      else if (key == "V") {
        try {
          cfg.V = parse_poly(value);
        } catch (const Error& e) {
          throw Error(errc::config_parse, field + ": " + e.what());
        }
      } else if (key == "rates_file") cfg.rates_file = value;
      else throw Error(errc::config_parse, "unknown key " + field);
    } else if (section == "curvature") {
      if (key == "K") {
        if (value == "auto") cfg.k_auto = true;
        else {
          cfg.k_auto = false;
          cfg.K = parse_double(field, value);
        }
      } else throw Error(errc::config_parse, "unknown key " + field);
    } else if (section == "times") {
      if (key == "t_list") cfg.t_list = parse_list(field, value);
      else throw Error(errc::config_parse, "unknown key " + field);
    } else if (section == "exponents") {
      if (key == "alpha_list") cfg.alpha_list = parse_list(field, value);
      else if (key == "p_list") cfg.p_list = parse_list(field, value);
      else throw Error(errc::config_parse, "unknown key " + field);
    } else if (section == "transport") {
      if (key == "x") cfg.x = parse_double(field, value);
      else if (key == "y") cfg.y = parse_double(field, value);
      else if (key == "interp_t_list") cfg.interp_t_list = parse_list(field, value);
      else throw Error(errc::config_parse, "unknown key " + field);
    } else if (section == "evi") {
      if (key == "delta") cfg.delta = parse_double(field, value);
      else if (key == "mu0") cfg.mu0_spec = value;
      else throw Error(errc::config_parse, "unknown key " + field);
    } else if (section == "run") {
      if (key == "suites") cfg.suites = parse_words(value);
      else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(field, value));
      else if (key == "out_dir") cfg.out_dir = value;
      else throw Error(errc::config_parse, "unknown key " + field);
    } else {
      throw Error(errc::config_parse, "unknown section [" + section + "]");
    }
  }
  if (!cfg.rates_file.empty() && std::filesystem::path(cfg.rates_file).is_relative())
    cfg.rates_file = (std::filesystem::path(base_dir) / cfg.rates_file).string();
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(errc::config_parse, "cannot open config file " + path);
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config(is, dir.empty() ? "." : dir);
}

} // namespace g2lab
