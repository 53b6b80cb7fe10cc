#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "unanimity/types.hpp"

namespace unanimity {

/// Where a home sits for a child: no unanimous improver (H*), some unanimous
/// improver (H-), or not acceptable to both the child and the matchmaker.
enum class HomeClass : std::uint8_t { kUnanimous = 0, kNonUnanimous = 1, kUnacceptable = 2 };

struct HomeClasses {
  std::vector<HomeId> unanimous;      // H*
  std::vector<HomeId> non_unanimous;  // H-

  friend bool operator==(const HomeClasses&, const HomeClasses&) = default;
};

// Ranking-level forms. `domain` lists the candidate homes; improvers and
// classes are computed as if no other home existed.
std::vector<HomeId> improvers(const StrictRanking& pref, const StrictRanking& eval, Slot h,
                              std::span<const HomeId> domain);
HomeClasses classify_homes(const StrictRanking& pref, const StrictRanking& eval,
                           std::span<const HomeId> domain);

/// Homes better than h on both the child's preference and the evaluation.
/// For the outside option these are the unanimously acceptable homes.
std::vector<HomeId> improvers(const Problem& problem, ChildId c, Slot h);

HomeClasses classify_homes(const Problem& problem, ChildId c);

/// Two tiers: H* then H-, both computed within `domain`. Homes outside the
/// tiers are unacceptable. `domain` must only contain homes feasible for c.
WeakRanking unanimous_ranking(const Problem& problem, ChildId c, std::span<const HomeId> domain);
WeakRanking unanimous_ranking(const Problem& problem, ChildId c);

/// I*(mu): children placed in one of their H* homes.
std::vector<ChildId> unanimous_children(const Problem& problem, const Matching& m);
/// kappa(mu): children placed in a unanimously acceptable home.
std::vector<ChildId> matched_acceptably(const Problem& problem, const Matching& m);

/// Acceptable means no child sits at a home that is not unanimously acceptable.
bool is_acceptable(const Problem& problem, const Matching& m);

/// True when `better` makes every child weakly better off and someone strictly
/// better off under the chosen ranking.
bool pareto_dominates(const Problem& problem, const Matching& better, const Matching& worse,
                      PrefOrEval order);

/// True when `better` weakly grows both I* and kappa and strictly grows one.
/// Both matchings must be acceptable.
bool unanimously_dominates(const Problem& problem, const Matching& better, const Matching& worse);

/// Polynomial unanimity test through the two-tier reduction: the matching is
/// unanimous iff no cycle or chain of reassignments is weakly better for
/// everyone on the unanimous rankings and strictly better for someone.
bool is_tier_efficient(const Problem& problem, const Matching& m);

/// Classes and improver sets for every child-home pair of a problem, computed
/// once for the hot loops of mechanisms, the oracle, and the simulator.
class UnanimityTable {
 public:
  explicit UnanimityTable(const Problem& problem);

  HomeClass at(ChildId c, HomeId h) const { return classes_[c.value * homes_ + h.value]; }
  /// 0 for H*, 1 for H-, 2 for the outside option, 3 for unacceptable homes.
  int tier(ChildId c, Slot h) const {
    if (!h) return 2;
    const auto k = at(c, *h);
    return k == HomeClass::kUnacceptable ? 3 : static_cast<int>(k);
  }
  std::size_t improver_count(ChildId c, Slot h) const;

  /// Improver sets as bitmasks over home indices; only for markets with at
  /// most 64 homes.
  bool has_masks() const noexcept { return !masks_.empty(); }
  std::uint64_t improver_mask(ChildId c, Slot h) const {
    return masks_[c.value * (homes_ + 1) + (h ? h->value : homes_)];
  }

  std::size_t home_count() const noexcept { return homes_; }

 private:
  std::size_t homes_ = 0;
  std::vector<HomeClass> classes_;
  std::vector<std::uint32_t> counts_;
  std::vector<std::uint64_t> masks_;
};

}  // namespace unanimity
