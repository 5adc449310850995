#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kzb/report.hpp"
#include "kzbcli/config.hpp"

namespace kzbcli {

struct Report {
  std::string command;
  RunConfig config;
  std::vector<kzb::CheckResult> records;
  // Named text blocks (serialized series, tables) printed after the records.
  std::vector<std::pair<std::string, std::string>> sections;

  void add(std::vector<kzb::CheckResult> more);
  // Sorts records by name, then parameters.
  void sort();
  bool pass() const;
  std::string to_text() const;
  std::string to_json() const;
};

}  // namespace kzbcli
