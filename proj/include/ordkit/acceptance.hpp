#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ordkit {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
  double limit_seconds;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  /// Returns the detail line; sets pass.
  std::function<std::string(bool& pass)> run;
};

/// The twelve acceptance criteria, in order.
const std::vector<Criterion>& acceptance_criteria();

/// True when `filter` (comma separated ids or name substrings; empty = all)
/// selects c.
bool criterion_selected(const Criterion& c, const std::string& filter);

/// Runs the selected criteria. Each result line is written to `out` as soon
/// as it is known (when out is non-null). A criterion also fails when it
/// overruns its time limit.
std::vector<CriterionResult> run_acceptance(const std::string& filter, std::ostream* out);

std::string format_result(const CriterionResult& r);

}  // namespace ordkit
