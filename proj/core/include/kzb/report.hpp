#pragma once

#include <map>
#include <string>
#include <vector>

namespace kzb {

// One verification record: a named check with its parameters, the largest
// residual observed and the tolerance it was held to.
struct CheckResult {
  std::string name;
  std::map<std::string, std::string> params;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

inline CheckResult make_check(std::string name, std::map<std::string, std::string> params, double residual,
                              double tolerance, std::string note = {}) {
  CheckResult r{std::move(name), std::move(params), residual, tolerance, residual <= tolerance, std::move(note)};
  return r;
}

}  // namespace kzb
