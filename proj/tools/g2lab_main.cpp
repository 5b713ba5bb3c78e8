#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "g2lab/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"g2lab: curvature, semigroup and transport verification lab"};
  app.require_subcommand(1);

  std::string config_path, report_path;

  auto* run = app.add_subcommand("run", "run the configured check suites");
  run->add_option("config", config_path, "experiment config file")->required();

  auto* validate = app.add_subcommand("validate", "parse and validate a config file");
  validate->add_option("config", config_path, "experiment config file")->required();

  auto* plots = app.add_subcommand("plots", "write a plot script from a report");
  plots->add_option("report", report_path, "report.csv produced by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return g2lab::run_config(config_path);
    if (validate->parsed()) {
      g2lab::parse_config_file(config_path);
      std::cout << "config ok\n";
      return 0;
    }
    if (plots->parsed()) {
      std::cout << g2lab::emit_plots(report_path) << "\n";
      return 0;
    }
  } catch (const g2lab::Error& e) {
    std::cerr << "g2lab: " << e.what() << "\n";
    return e.code() == g2lab::errc::config_parse ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "g2lab: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
