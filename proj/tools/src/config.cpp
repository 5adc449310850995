#include "kzbcli/config.hpp"

#include <fmt/format.h>

namespace kzbcli {

void RunConfig::validate() const {
  if (level < 1) throw ConfigError("level must be at least 1");
  if (degree < 2) throw ConfigError("degree must be at least 2");
  if (degree > kzb::Word::kMaxLength - 1) throw ConfigError(fmt::format("degree must be at most {}", kzb::Word::kMaxLength - 1));
  if (qorder < 1) throw ConfigError("qorder must be at least 1");
  if (cutoff < 8) throw ConfigError("cutoff must be at least 8");
  if (!(tol > 0)) throw ConfigError("tol must be positive");
  if (samples < 1) throw ConfigError("samples must be at least 1");
  if (!(tau_im_min > 0) || tau_im_max < tau_im_min) throw ConfigError("tau-im box must satisfy 0 < min <= max");
  if (tau_re_max < tau_re_min) throw ConfigError("tau-re box must satisfy min <= max");
}

std::string RunConfig::to_text() const {
  std::string s;
  s += fmt::format("level = {}\n", level);
  s += fmt::format("subgroup = {}\n", kzb::subgroup_name(subgroup));
  s += fmt::format("degree = {}\n", degree);
  s += fmt::format("qorder = {}\n", qorder);
  s += fmt::format("cutoff = {}\n", cutoff);
  s += fmt::format("tol = {:.6g}\n", tol);
  s += fmt::format("samples = {}\n", samples);
  s += fmt::format("seed = {}\n", seed);
  s += fmt::format("tau-re-min = {:.6g}\n", tau_re_min);
  s += fmt::format("tau-re-max = {:.6g}\n", tau_re_max);
  s += fmt::format("tau-im-min = {:.6g}\n", tau_im_min);
  s += fmt::format("tau-im-max = {:.6g}\n", tau_im_max);
  return s;
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : to_text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace kzbcli
