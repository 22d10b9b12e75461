#include <iostream>
#include <string>

#include "ordkit/acceptance.hpp"

// Prints one PASS/FAIL line per criterion; optional argument is a filter.
int main(int argc, char** argv) {
  const std::string filter = argc > 1 ? argv[1] : "";
  const auto results = ordkit::run_acceptance(filter, &std::cout);
  std::size_t failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 && !results.empty() ? 0 : 1;
}
