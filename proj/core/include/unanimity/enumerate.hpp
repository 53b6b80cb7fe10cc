#pragma once

#include <span>
#include <vector>

#include "unanimity/types.hpp"

namespace unanimity {

/// Every strict ranking over `homes`. With truncations, rankings of every
/// subset are included (the empty ranking among them); otherwise only full
/// permutations. The result is sorted lexicographically.
std::vector<StrictRanking> all_rankings(std::span<const HomeId> homes, bool truncations = true);
std::vector<StrictRanking> all_rankings(std::size_t home_count, bool truncations = true);

/// Number of rankings all_rankings would produce.
std::uint64_t ranking_count(std::size_t home_count, bool truncations = true);

}  // namespace unanimity
