#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace g2lab {

// Outcome of one inequality/identity verification.
// slack = rhs - lhs; pass <=> slack >= -tolerance.
struct CheckReport {
  std::string name;
  std::string state_or_time; // worst state index, time, or "-"
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

CheckReport make_report(std::string name, std::string state_or_time, double lhs, double rhs,
                        double tolerance);

// CSV rows `name,state_or_time,lhs,rhs,slack,tolerance,pass`
void write_reports_csv(std::ostream& os, const std::vector<CheckReport>& reports,
                       bool header = true);

std::string format_g17(double v);
std::string csv_field(const std::string& s); // comma/newline-safe cell

} // namespace g2lab
