#pragma once

#include <random>

#include "kzb/lie.hpp"

namespace kzb::testing {

// Sum of a few random left-normed brackets of up to `depth` generators with
// small integer coefficients.
inline Series random_lie(std::mt19937_64& rng, const LieContext& ctx, int depth) {
  std::uniform_int_distribution<int> gen(0, ctx.alphabet().size() - 1), len(1, depth), coef(-2, 2);
  Series out = ctx.zero();
  for (int k = 0; k < 4; ++k) {
    Series b = ctx.gen(gen(rng));
    const int L = len(rng);
    for (int i = 1; i < L; ++i) b = bracket(b, ctx.gen(gen(rng)));
    out += b * cplx(coef(rng), coef(rng));
  }
  return out;
}

}  // namespace kzb::testing
