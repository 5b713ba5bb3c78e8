#include "g2lab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "g2lab/gamma.hpp"
#include "g2lab/model1d.hpp"
#include "g2lab/rng.hpp"
#include "g2lab/semigroup.hpp"

namespace g2lab {

namespace {

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// keep the worst row (smallest slack) per name across a corpus
class WorstPerName {
 public:
  void add(const CheckReport& r) {
    auto it = rows_.find(r.name);
    if (it == rows_.end() || r.slack < it->second.slack) rows_[r.name] = r;
  }
  void add(const std::vector<CheckReport>& rs) {
    for (const auto& r : rs) add(r);
  }
  std::vector<CheckReport> take() const {
    std::vector<CheckReport> out;
    for (const auto& [name, r] : rows_) out.push_back(r);
    return out;
  }

 private:
  std::map<std::string, CheckReport> rows_;
};

UnivariatePoly random_poly(Rng& rng, int max_degree) {
  std::vector<double> c(static_cast<size_t>(max_degree) + 1);
  for (double& v : c) v = rng.uniform(-2.0, 2.0);
  return UnivariatePoly(std::move(c));
}

MultivariatePoly random_composition_poly(Rng& rng, int nvars) {
  // random terms of total degree 1..2, zero constant term
  MultivariatePoly p(nvars);
  for (int i = 0; i < nvars; ++i) {
    std::vector<int> e(static_cast<size_t>(nvars), 0);
    e[static_cast<size_t>(i)] = 1;
    p.add_term(e, rng.uniform(-2.0, 2.0));
  }
  for (int i = 0; i < nvars; ++i)
    for (int j = i; j < nvars; ++j) {
      std::vector<int> e(static_cast<size_t>(nvars), 0);
      e[static_cast<size_t>(i)] += 1;
      e[static_cast<size_t>(j)] += 1;
      p.add_term(e, rng.uniform(-1.0, 1.0));
    }
  return p;
}

Field random_field(Rng& rng, int n) {
  Field f(n, 0.0);
  for (int i = 0; i < n; ++i) f[i] = rng.normal();
  return f;
}

// ---------------------------------------------------------------------------
// suites

std::vector<CheckReport> calculus_suite(const ExperimentConfig& cfg) {
  Rng rng(cfg.seed);
  WorstPerName worst;
  const Interval box{-1.0, 1.0};

  // pinned instances: cubic-triple rules, the rank-one perturbation
  // polynomial, and the equality cases of the pointwise estimates
  {
    const UnivariatePoly x = UnivariatePoly::variable();
    const std::vector<UnivariatePoly> fs = {x, x * x, x * x * x};
    const UnivariatePoly V = parse_poly("0.5*x^2");
    MultivariatePoly phi(3), psi(3);
    phi = parse_multipoly("y1 + y2*y3", 3);
    psi = parse_multipoly("y1*y1 - y3", 3);
    worst.add(verify_calculus_rules(fs, V, phi, psi, box));
    worst.add(verify_fundamental_identity(fs, V, phi, box));

    // lambda f1 + (f2 - a)(f3 - b) - ab, the rank-one probe
    MultivariatePoly probe(3);
    const double lambda = 0.7, aa = 0.3, bb = -0.4;
    probe.add_term({1, 0, 0}, lambda);
    probe.add_term({0, 1, 1}, 1.0);
    probe.add_term({0, 1, 0}, -bb);
    probe.add_term({0, 0, 1}, -aa);
    worst.add(verify_fundamental_identity(fs, V, probe, box));

    worst.add(verify_theorem_estimates(x * x, x, x * x * x, V, 1.0, box, 1001));
  }

  // seeded random corpus
  for (int it = 0; it < 100; ++it) {
    std::vector<UnivariatePoly> fs = {random_poly(rng, 3), random_poly(rng, 3),
                                      random_poly(rng, 3)};
    const double K = rng.uniform(-1.0, 1.0);
    const double eps = rng.uniform(0.0, 0.5);
    UnivariatePoly V(std::vector<double>{0.0, 0.0, 0.5 * K, 0.0, eps});
    const MultivariatePoly phi = random_composition_poly(rng, 3);
    const MultivariatePoly psi = random_composition_poly(rng, 3);
    worst.add(verify_calculus_rules(fs, V, phi, psi, box));
    worst.add(verify_fundamental_identity(fs, V, phi, box));
    worst.add(verify_theorem_estimates(fs[0], fs[1], fs[2], V, K, box, 101));
  }
  return worst.take();
}

std::vector<CheckReport> curvature_suite(const ExperimentConfig& cfg,
                                         const ReversibleGenerator& gen) {
  Rng rng(cfg.seed + 1);
  std::vector<CheckReport> out;

  const CurvatureResult global = curvature_global(gen);
  const double k_star = global.is_finite() ? global.value : 0.0;
  out.push_back(make_report("curvature_global", std::to_string(global.state), k_star, k_star, 0.0));
  if (gen.space.positions) {
    const CurvatureResult interior = curvature_interior(gen);
    out.push_back(make_report("curvature_interior", std::to_string(interior.state),
                              interior.is_finite() ? interior.value : 0.0,
                              interior.is_finite() ? interior.value : 0.0, 0.0));
  }

  // weak-form certificate at K*
  const int n = gen.size();
  const int n_fields = n <= 32 ? 200 : 50;
  const int n_tests = n <= 32 ? 20 : 10;
  {
    double worst_slack = 0.0, worst_lhs = 0.0, worst_rhs = 0.0, scale = 1.0;
    std::string worst_key = "-";
    bool first = true;
    for (int a = 0; a < n_fields; ++a) {
      const Field f = random_field(rng, n);
      for (int b = 0; b < n_tests; ++b) {
        Field phi(n, 0.0);
        for (int i = 0; i < n; ++i) phi[i] = rng.uniform();
        const double lhs_weak = gamma2_weak(gen, f, phi);
        double gamma_mass = 0.0;
        const Field gf = gamma(gen, f);
        for (int i = 0; i < n; ++i) gamma_mass += gen.measure.weights[i] * gf[i] * phi[i];
        const double rhs_weak = k_star * gamma_mass;
        scale = std::max({scale, std::abs(lhs_weak), std::abs(rhs_weak)});
        if (first || lhs_weak - rhs_weak < worst_slack) {
          worst_slack = lhs_weak - rhs_weak;
          worst_lhs = rhs_weak; // certificate: rhs <= lhs
          worst_rhs = lhs_weak;
          worst_key = std::to_string(a) + "/" + std::to_string(b);
          first = false;
        }
      }
    }
    out.push_back(
        make_report("be_certificate", worst_key, worst_lhs, worst_rhs, 1e-8 * scale));
  }

  // energy bound for Γ(f) derived from the maximum-principle estimate
  {
    double worst_slack = 0.0, worst_lhs = 0.0, worst_rhs = 0.0, scale = 1.0;
    std::string worst_key = "-";
    bool first = true;
    const int n_energy = n <= 32 ? 100 : 25;
    for (int a = 0; a < n_energy; ++a) {
      const Field f = random_field(rng, n);
      const Field gf = gamma(gen, f);
      const Field gfl = gamma(gen, f, apply(gen, f));
      const double lhs = dirichlet_energy(gen, gf);
      double rhs = 0.0;
      for (int i = 0; i < n; ++i)
        rhs += -2.0 * gen.measure.weights[i] * (gf[i] * gfl[i] + k_star * gf[i] * gf[i]);
      scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
      if (first || rhs - lhs < worst_slack) {
        worst_slack = rhs - lhs;
        worst_lhs = lhs;
        worst_rhs = rhs;
        worst_key = std::to_string(a);
        first = false;
      }
    }
    out.push_back(make_report("gamma_energy_bound", worst_key, worst_lhs, worst_rhs, 1e-8 * scale));
  }
  return out;
}

std::vector<CheckReport> gradient_suite(const ExperimentConfig& cfg,
                                        const ReversibleGenerator& gen,
                                        const SpectralFactorization& sf, double K) {
  Rng rng(cfg.seed + 2);
  Field f(gen.size(), 0.0);
  if (gen.space.positions)
    for (int i = 0; i < gen.size(); ++i) f[i] = (*gen.space.positions)[static_cast<size_t>(i)];
  else
    f = random_field(rng, gen.size());

  std::vector<CheckReport> out = gradient_estimate_report(sf, gen, f, K, cfg.t_list, cfg.alpha_list);

  // mollifier: approximation quality is monotone in eps
  const double e1 = 0.1, e2 = 0.01, e3 = 0.001;
  auto l2_err = [&](double eps) {
    const Field g = mollify(sf, f, eps);
    Field d(gen.size(), 0.0);
    for (int i = 0; i < gen.size(); ++i) d[i] = g[i] - f[i];
    return std::sqrt(inner_m(gen, d, d));
  };
  const double err1 = l2_err(e1), err2 = l2_err(e2), err3 = l2_err(e3);
  out.push_back(make_report("mollifier_monotone(1e-2)", "-", err2, err1, 0.0));
  out.push_back(make_report("mollifier_monotone(1e-3)", "-", err3, err2, 0.0));

  // mollified generator identity via the kernel-derivative quadrature
  {
    const double eps = 0.05;
    const Field lhs = apply(gen, mollify(sf, f, eps));
    const Field rhs = mollify_generator_quadrature(sf, f, eps);
    double diff = 0.0, scale = 1.0;
    for (int i = 0; i < gen.size(); ++i) {
      diff = std::max(diff, std::abs(lhs[i] - rhs[i]));
      scale = std::max({scale, std::abs(lhs[i]), std::abs(rhs[i])});
    }
    out.push_back(make_report("mollifier_generator_identity", "-", diff, 0.0, 1e-6 * scale));
  }

  // mass conservation under mollification
  {
    const Field g = mollify(sf, f, 0.01);
    const double lhs = integrate(gen, g);
    const double rhs = integrate(gen, f);
    out.push_back(make_report("mollifier_mass", "-", std::abs(lhs - rhs), 0.0,
                              1e-10 * std::max(1.0, std::abs(rhs))));
  }
  return out;
}

std::vector<CheckReport> contraction_suite(const ExperimentConfig& cfg,
                                           const ReversibleGenerator& gen,
                                           const SpectralFactorization& sf, double K) {
  std::vector<CostFunction> costs;
  costs.push_back(CostFunction::custom({{0.0, 0.0}, {1.0, 1.0}})); // min(r, 1)

  std::vector<CheckReport> out =
      contraction_experiment(sf, gen, K, cfg.x, cfg.y, cfg.t_list, cfg.p_list, costs);

  // decay-rate fit of W2 between the two fundamental solutions
  if (cfg.t_list.size() >= 2 && std::abs(K) > 1e-9) {
    const auto& pos = *gen.space.positions;
    int ix = 0, iy = 0;
    for (size_t i = 1; i < pos.size(); ++i) {
      if (std::abs(pos[i] - cfg.x) < std::abs(pos[static_cast<size_t>(ix)] - cfg.x))
        ix = static_cast<int>(i);
      if (std::abs(pos[i] - cfg.y) < std::abs(pos[static_cast<size_t>(iy)] - cfg.y))
        iy = static_cast<int>(i);
    }
    std::vector<double> w;
    for (double t : cfg.t_list)
      w.push_back(wasserstein_1d(heat_flow_dirac(sf, ix, t), heat_flow_dirac(sf, iy, t), 2.0));
    const double slope = fit_log_slope(cfg.t_list, w);
    out.push_back(make_report("decay_rate_fit", "-", std::abs(slope + K), 0.0, 0.02 * std::abs(K)));
  }
  return out;
}

std::vector<CheckReport> evi_suite(const ExperimentConfig& cfg, const ReversibleGenerator& gen,
                                   const SpectralFactorization& sf, double K) {
  const DiscreteMeasure mu0 = measure_from_spec(cfg.mu0_spec, gen);
  const DiscreteMeasure nu = measure_from_spec("stationary", gen);
  return evi_check(sf, gen, K, mu0, nu, cfg.t_list, cfg.delta);
}

std::vector<CheckReport> cd_suite(const ExperimentConfig& cfg, const ReversibleGenerator& gen,
                                  double K) {
  const DiscreteMeasure mu0 =
      measure_from_spec("gaussian:" + fmt_short(cfg.x) + ",0.7", gen);
  const DiscreteMeasure mu1 =
      measure_from_spec("gaussian:" + fmt_short(cfg.y) + ",0.7", gen);
  return displacement_convexity_check(mu0, mu1, gen, K, cfg.interp_t_list);
}

} // namespace

ReversibleGenerator space_from_config(const ExperimentConfig& cfg) {
  if (cfg.space_kind == "grid") return build_weighted_grid(cfg.a, cfg.b, cfg.n, cfg.V);
  return load_generator_file(cfg.rates_file);
}

DiscreteMeasure measure_from_spec(const std::string& spec, const ReversibleGenerator& gen) {
  if (!gen.space.positions)
    throw Error(errc::degenerate_grid, "measure specs need a grid generator");
  const auto& pos = *gen.space.positions;
  const int n = gen.size();
  std::vector<double> w(static_cast<size_t>(n), 0.0);

  if (spec == "stationary") {
    const double total = gen.measure.total();
    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = gen.measure.weights[i] / total;
  } else if (spec == "left_half") {
    const double mid = 0.5 * (pos.front() + pos.back());
    double total = 0.0;
    for (int i = 0; i < n; ++i)
      if (pos[static_cast<size_t>(i)] < mid) total += gen.measure.weights[i];
    for (int i = 0; i < n; ++i)
      if (pos[static_cast<size_t>(i)] < mid)
        w[static_cast<size_t>(i)] = gen.measure.weights[i] / total;
  } else if (spec.rfind("node:", 0) == 0) {
    const int idx = std::stoi(spec.substr(5));
    if (idx < 0 || idx >= n) throw Error(errc::config_parse, "evi.mu0: node index out of range");
    w[static_cast<size_t>(idx)] = 1.0;
  } else if (spec.rfind("gaussian:", 0) == 0) {
    const std::string args = spec.substr(9);
    const auto comma = args.find(',');
    if (comma == std::string::npos)
      throw Error(errc::config_parse, "evi.mu0: expected gaussian:center,sigma");
    const double center = std::stod(args.substr(0, comma));
    const double sigma = std::stod(args.substr(comma + 1));
    if (!(sigma > 0.0)) throw Error(errc::config_parse, "evi.mu0: sigma must be positive");
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = (pos[static_cast<size_t>(i)] - center) / sigma;
      w[static_cast<size_t>(i)] = std::exp(-0.5 * z * z);
      total += w[static_cast<size_t>(i)];
    }
    for (double& wi : w) wi /= total;
  } else {
    throw Error(errc::config_parse, "evi.mu0: unknown measure spec '" + spec + "'");
  }
  return make_discrete_measure(pos, std::move(w));
}

std::vector<SuiteRow> run_suites(const ExperimentConfig& cfg) {
  std::vector<SuiteRow> rows;
  auto append = [&](const std::string& suite, const std::vector<CheckReport>& rs) {
    for (const auto& r : rs) rows.push_back({suite, r});
  };

  const bool needs_space = cfg.wants("curvature") || cfg.wants("gradient") ||
                           cfg.wants("contraction") || cfg.wants("evi") || cfg.wants("cd");
  const bool needs_flow =
      cfg.wants("gradient") || cfg.wants("contraction") || cfg.wants("evi");

  ReversibleGenerator gen;
  SpectralFactorization sf;
  double K = 0.0;
  if (needs_space) {
    gen = space_from_config(cfg);
    if (cfg.k_auto) {
      const CurvatureResult cap = effective_curvature(gen);
      if (!cap.is_finite())
        throw Error(errc::config_parse, "curvature.K: auto failed, bound is " + cap.to_string());
      K = cap.value;
    } else {
      K = cfg.K;
    }
    if (needs_flow) sf = factorize(gen);
  }

  struct SuiteJob {
    std::string name;
    std::function<std::vector<CheckReport>()> fn;
  };
  std::vector<SuiteJob> jobs;
  if (cfg.wants("calculus")) jobs.push_back({"calculus", [&] { return calculus_suite(cfg); }});
  if (cfg.wants("curvature"))
    jobs.push_back({"curvature", [&] { return curvature_suite(cfg, gen); }});
  if (cfg.wants("gradient"))
    jobs.push_back({"gradient", [&] { return gradient_suite(cfg, gen, sf, K); }});
  if (cfg.wants("contraction"))
    jobs.push_back({"contraction", [&] { return contraction_suite(cfg, gen, sf, K); }});
  if (cfg.wants("evi")) jobs.push_back({"evi", [&] { return evi_suite(cfg, gen, sf, K); }});
  if (cfg.wants("cd")) jobs.push_back({"cd", [&] { return cd_suite(cfg, gen, K); }});

  for (const auto& job : jobs) {
    try {
      append(job.name, job.fn());
    } catch (const Error& e) {
      // failure isolation: record and continue with the remaining suites
      append(job.name, {make_report(std::string("suite_error(") + e.what() + ")", "-", 1.0, 0.0, 0.0)});
    }
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SuiteRow& a, const SuiteRow& b) {
    if (a.suite != b.suite) return a.suite < b.suite;
    if (a.report.name != b.report.name) return a.report.name < b.report.name;
    return a.report.state_or_time < b.report.state_or_time;
  });
  return rows;
}

namespace {

std::string resolve_out_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("G2LAB_OUT"); env && *env) return env;
  return cfg.out_dir;
}

} // namespace

int run_config(const std::string& config_path) {
  ExperimentConfig cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const Error& e) {
    std::cerr << "g2lab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "g2lab: " << e.what() << "\n";
    return 2;
  }

  std::vector<SuiteRow> rows;
  try {
    rows = run_suites(cfg);
  } catch (const Error& e) {
    std::cerr << "g2lab: " << e.what() << "\n";
    return 1;
  }

  const std::string out_dir = resolve_out_dir(cfg);
  std::filesystem::create_directories(out_dir);
  const std::string report_path = out_dir + "/report.csv";
  {
    std::ofstream os(report_path);
    os << "suite,name,state_or_time,lhs,rhs,slack,tolerance,pass\n";
    for (const auto& row : rows) {
      os << row.suite << ',' << csv_field(row.report.name) << ','
         << csv_field(row.report.state_or_time) << ',' << format_g17(row.report.lhs) << ','
         << format_g17(row.report.rhs) << ',' << format_g17(row.report.slack) << ','
         << format_g17(row.report.tolerance) << ',' << (row.report.pass ? "true" : "false")
         << '\n';
    }
  }

  // summary: per-suite pass counts and worst slack
  std::map<std::string, std::pair<int, int>> counts; // suite -> (pass, total)
  std::map<std::string, const SuiteRow*> worst;
  for (const auto& row : rows) {
    auto& c = counts[row.suite];
    c.second += 1;
    if (row.report.pass) c.first += 1;
    auto it = worst.find(row.suite);
    if (it == worst.end() || row.report.slack < it->second->report.slack) worst[row.suite] = &row;
  }
  int total = 0, passed = 0;
  {
    std::ofstream os(out_dir + "/summary.txt");
    os << "config = " << config_path << "\n";
    os << "seed = " << cfg.seed << "\n";
    for (const auto& [suite, c] : counts) {
      os << "suite " << suite << ": " << c.first << "/" << c.second << " passed, worst slack = "
         << format_g17(worst[suite]->report.slack) << " (" << worst[suite]->report.name << ")\n";
      total += c.second;
      passed += c.first;
    }
    os << "total: " << passed << "/" << total << " passed\n";
  }
  return passed == total ? 0 : 1;
}

std::string emit_plots(const std::string& report_path) {
  std::ifstream is(report_path);
  if (!is) throw Error(errc::malformed_report, "cannot open " + report_path);
  std::string header;
  if (!std::getline(is, header) ||
      header != "suite,name,state_or_time,lhs,rhs,slack,tolerance,pass")
    throw Error(errc::malformed_report, "unexpected header in " + report_path);

  struct Row {
    std::string name, key;
    double lhs, rhs, slack;
  };
  std::map<std::string, std::vector<Row>> suites;
  std::string line;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8)
      throw Error(errc::malformed_report, "line " + std::to_string(lineno) + ": expected 8 columns");
    try {
      suites[cells[0]].push_back(
          {cells[1], cells[2], std::stod(cells[3]), std::stod(cells[4]), std::stod(cells[5])});
    } catch (const std::exception&) {
      throw Error(errc::malformed_report, "line " + std::to_string(lineno) + ": bad number");
    }
  }

  const std::string out_path =
      (std::filesystem::path(report_path).parent_path() / "plots.gp").string();
  std::ofstream os(out_path);
  if (suites.empty()) {
    std::cerr << "g2lab: report has no rows, writing an empty plot script\n";
    return out_path;
  }
  os << "# generated from " << std::filesystem::path(report_path).filename().string() << "\n";
  for (const auto& [suite, rs] : suites) {
    os << "\n# ---- suite: " << suite << " ----\n";
    os << "set title '" << suite << "'\n";
    if (suite == "contraction") {
      os << "set logscale y\nset xlabel 't'\nset ylabel 'W_p'\n";
      os << "plot '-' using 1:2 with linespoints title 'lhs', "
            "'-' using 1:2 with linespoints title 'decay bound'\n";
      for (const auto& r : rs)
        if (r.name.rfind("wp_contraction", 0) == 0) os << r.key << ' ' << format_g17(r.lhs) << '\n';
      os << "e\n";
      for (const auto& r : rs)
        if (r.name.rfind("wp_contraction", 0) == 0) os << r.key << ' ' << format_g17(r.rhs) << '\n';
      os << "e\n";
    } else {
      os << "unset logscale y\nset xlabel 'check'\nset ylabel 'slack'\n";
      os << "plot '-' using 0:2:xtic(1) with points title 'slack'\n";
      for (const auto& r : rs) os << "\"" << r.name << "\" " << format_g17(r.slack) << '\n';
      os << "e\n";
    }
  }
  return out_path;
}

} // namespace g2lab
