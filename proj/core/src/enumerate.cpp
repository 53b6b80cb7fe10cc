#include "unanimity/enumerate.hpp"

#include <algorithm>

namespace unanimity {

namespace {

void extend(std::span<const HomeId> homes, std::vector<HomeId>& prefix, std::vector<bool>& used,
            bool truncations, std::vector<StrictRanking>& out) {
  if (truncations || prefix.size() == homes.size()) out.emplace_back(prefix);
  for (std::size_t i = 0; i < homes.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    prefix.push_back(homes[i]);
    extend(homes, prefix, used, truncations, out);
    prefix.pop_back();
    used[i] = false;
  }
}

}  // namespace

std::vector<StrictRanking> all_rankings(std::span<const HomeId> homes, bool truncations) {
  std::vector<StrictRanking> out;
  out.reserve(ranking_count(homes.size(), truncations));
  std::vector<HomeId> prefix;
  std::vector<bool> used(homes.size(), false);
  extend(homes, prefix, used, truncations, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<StrictRanking> all_rankings(std::size_t home_count, bool truncations) {
  std::vector<HomeId> homes;
  for (std::uint32_t h = 0; h < home_count; ++h) homes.emplace_back(h);
  return all_rankings(homes, truncations);
}

std::uint64_t ranking_count(std::size_t home_count, bool truncations) {
  // sum over k of n!/(n-k)!, or n! alone
  std::uint64_t total = truncations ? 1 : 0;
  std::uint64_t falling = 1;
  for (std::size_t k = 1; k <= home_count; ++k) {
    falling *= home_count - k + 1;
    if (truncations || k == home_count) total += falling;
  }
  if (home_count == 0) return 1;
  return total;
}

}  // namespace unanimity
