#pragma once

#include <vector>

#include "mtk/ring.hpp"

namespace mtk {

enum class StabilityKind { Weak, Full };

struct StabilityReport {
  StabilityKind kind = StabilityKind::Weak;
  int k = 0;
  bool holds = false;
  /// Weak: the lexicographically first breaking tuple (r_1, ..., r_{k-1}).
  /// Full: the first breaking tuple of pairs, flattened as (r_1, s_1, ..., r_k, s_k).
  /// Empty when holds.
  std::vector<RingElement> witness;
};

/// Weak k-fold stability (k >= 2): for all r_1..r_{k-1} in R there is a unit r with every
/// r_i + r a unit. Decided exactly over all (k-1)-tuples.
StabilityReport check_weak_stability(const Ring& ring, int k);

/// k-fold stability (k >= 1): for all pairs (r_i, s_i) with r_i R + s_i R = R there is r in R
/// with every r_i + r s_i a unit. Cost grows as |R|^3; callers bound the carrier.
StabilityReport check_full_stability(const Ring& ring, int k);

/// Largest carrier for which the CLI computes full stability tables.
inline constexpr std::size_t kFullStabilityCarrierLimit = 128;

}  // namespace mtk
