#include "g2lab/report.hpp"

#include <cstdio>
#include <ostream>

namespace g2lab {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CheckReport make_report(std::string name, std::string state_or_time, double lhs, double rhs,
                        double tolerance) {
  CheckReport r;
  r.name = std::move(name);
  r.state_or_time = std::move(state_or_time);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.tolerance = tolerance;
  r.pass = r.slack >= -tolerance;
  return r;
}

std::string csv_field(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return out;
}

void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports, bool header) {
  if (header) os << "name,state_or_time,lhs,rhs,slack,tolerance,pass\n";
  for (const auto& r : reports) {
    os << csv_field(r.name) << ',' << csv_field(r.state_or_time) << ',' << format_g17(r.lhs) << ','
       << format_g17(r.rhs) << ',' << format_g17(r.slack) << ',' << format_g17(r.tolerance) << ','
       << (r.pass ? "true" : "false") << '\n';
  }
}

} // namespace g2lab
