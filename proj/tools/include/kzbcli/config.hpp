#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "kzb/word.hpp"

namespace kzbcli {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  int level = 1;
  kzb::Subgroup subgroup = kzb::Subgroup::Full;
  int degree = 5;
  int qorder = 20;
  int cutoff = 400;
  double tol = 1e-7;
  int samples = 10;
  std::uint64_t seed = 1;
  // Sample box for tau; z is drawn as u + v tau with u, v in [0, 1).
  double tau_re_min = -0.5, tau_re_max = 0.5;
  double tau_im_min = 0.8, tau_im_max = 2.0;
  std::string cache_dir = ".kzb-cache";
  std::string out;

  // Throws ConfigError on out-of-range values.
  void validate() const;
  // Canonical "key = value" text, one key per line in a fixed order.
  std::string to_text() const;
  // FNV-1a hash of to_text(), as 16 hex digits.
  std::string hash() const;
};

}  // namespace kzbcli
