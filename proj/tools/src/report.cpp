#include "kzbcli/report.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

namespace kzbcli {

namespace {
constexpr const char* kVersion = "0.1.0";
}

void Report::add(std::vector<kzb::CheckResult> more) {
  for (auto& r : more) records.push_back(std::move(r));
}

void Report::sort() {
  std::stable_sort(records.begin(), records.end(), [](const kzb::CheckResult& a, const kzb::CheckResult& b) {
    return std::tie(a.name, a.params) < std::tie(b.name, b.params);
  });
}

bool Report::pass() const {
  return std::all_of(records.begin(), records.end(), [](const kzb::CheckResult& r) { return r.pass; });
}

std::string Report::to_text() const {
  std::string s = fmt::format("# kzb report\ncommand = {}\nversion = {}\nconfig-hash = {}\n", command, kVersion, config.hash());
  s += config.to_text();
  int passed = 0;
  for (const auto& r : records) {
    s += fmt::format("record check={}", r.name);
    for (const auto& [k, v] : r.params) s += fmt::format(" {}={}", k, v);
    s += fmt::format(" residual={:.3e} tol={:.1e} status={}", r.residual, r.tolerance, r.pass ? "pass" : "fail");
    if (!r.note.empty()) s += fmt::format(" note=\"{}\"", r.note);
    s += "\n";
    passed += r.pass ? 1 : 0;
  }
  for (const auto& [name, body] : sections) {
    s += fmt::format("begin {}\n{}", name, body);
    if (!body.empty() && body.back() != '\n') s += "\n";
    s += fmt::format("end {}\n", name);
  }
  s += fmt::format("summary records={} passed={} failed={} status={}\n", records.size(), passed,
                   static_cast<int>(records.size()) - passed, pass() ? "pass" : "fail");
  return s;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config_hash"] = config.hash();
  nlohmann::ordered_json cfg;
  cfg["level"] = config.level;
  cfg["subgroup"] = kzb::subgroup_name(config.subgroup);
  cfg["degree"] = config.degree;
  cfg["qorder"] = config.qorder;
  cfg["cutoff"] = config.cutoff;
  cfg["tol"] = config.tol;
  cfg["samples"] = config.samples;
  cfg["seed"] = config.seed;
  cfg["tau_box"] = {config.tau_re_min, config.tau_re_max, config.tau_im_min, config.tau_im_max};
  j["config"] = cfg;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json e;
    e["check"] = r.name;
    e["params"] = r.params;
    e["residual"] = r.residual;
    e["tol"] = r.tolerance;
    e["pass"] = r.pass;
    if (!r.note.empty()) e["note"] = r.note;
    j["records"].push_back(e);
  }
  nlohmann::ordered_json sec = nlohmann::ordered_json::object();
  for (const auto& [name, body] : sections) sec[name] = body;
  j["sections"] = sec;
  j["summary"] = {{"records", records.size()}, {"pass", pass()}};
  return j.dump(2) + "\n";
}

}  // namespace kzbcli
