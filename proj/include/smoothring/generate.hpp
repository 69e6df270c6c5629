#pragma once

#include <vector>

#include "smoothring/random.hpp"
#include "smoothring/term.hpp"

namespace smoothring {

/// Seeded random terms for property checks.  Leaves are variables and
/// small constants; depth is bounded so values stay moderate.
struct TermGenerator {
  std::size_t arity = 1;
  unsigned max_depth = 3;
  bool allow_prims = true;
  bool allow_star = false;

  Term operator()(Rng& rng) const { return make(rng, max_depth); }

 private:
  Term leaf(Rng& rng) const {
    if (arity > 0 && rng.below(3) != 0) return var(rng.below(arity));
    static constexpr long kConsts[] = {-2, -1, 0, 1, 2, 3};
    if (rng.below(4) == 0) return cnst(Rational(kConsts[rng.below(6)], 2));
    return cnst(kConsts[rng.below(6)]);
  }

  Term make(Rng& rng, unsigned depth) const {
    if (depth == 0) return leaf(rng);
    std::size_t choices = 4 + (allow_prims ? 1 : 0) + (allow_star ? 1 : 0);
    std::size_t c = rng.below(choices);
    switch (c) {
      case 0: return leaf(rng);
      case 1: return make(rng, depth - 1) + make(rng, depth - 1);
      case 2: return make(rng, depth - 1) * make(rng, depth - 1);
      case 3: return -make(rng, depth - 1);
      default: break;
    }
    if (allow_prims && c == 4) return apply(kAllPrims[rng.below(kAllPrims.size())], make(rng, depth - 1));
    return star(make(rng, depth - 1));
  }
};

}  // namespace smoothring
