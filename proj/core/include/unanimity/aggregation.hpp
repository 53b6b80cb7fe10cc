#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unanimity/types.hpp"

namespace unanimity {

/// Combines a child's preference and the matchmaker's evaluation into one
/// strict ranking over `homes`. Homes left out of the result are unacceptable.
using AggregationFn = std::function<StrictRanking(const StrictRanking& pref, const StrictRanking& eval,
                                                  std::span<const HomeId> homes)>;

struct AggregationRule {
  std::string name;
  AggregationFn aggregate;

  StrictRanking operator()(const StrictRanking& pref, const StrictRanking& eval,
                           std::span<const HomeId> homes) const {
    return aggregate(pref, eval, homes);
  }
};

/// Lowest summed 1-based rank first; only homes acceptable on both rankings
/// are kept. Ties fall back to preference position, then home id.
StrictRanking borda(const StrictRanking& pref, const StrictRanking& eval, std::span<const HomeId> homes);
/// Sorted by the better of the two ranks. A home drops out only when neither
/// ranking lists it.
StrictRanking min_rank(const StrictRanking& pref, const StrictRanking& eval, std::span<const HomeId> homes);
/// Sorted by the worse of the two ranks. A home drops out when either ranking
/// omits it.
StrictRanking max_rank(const StrictRanking& pref, const StrictRanking& eval, std::span<const HomeId> homes);
/// H* in preference order, then H- in preference order.
StrictRanking extended_unanimity(const StrictRanking& pref, const StrictRanking& eval,
                                 std::span<const HomeId> homes);

enum class Dictator { kChild, kMatchmaker };
using DictatorSequence = std::vector<Dictator>;

/// Dictators take turns appending their best not-yet-chosen home. The sequence
/// repeats from the start when exhausted; a dictator with nothing left to add
/// passes. Stops once neither party has an acceptable unchosen home.
StrictRanking serial_choice(const DictatorSequence& seq, const StrictRanking& pref,
                            const StrictRanking& eval, std::span<const HomeId> homes);

AggregationRule borda_rule();
AggregationRule min_rank_rule();
AggregationRule max_rank_rule();
AggregationRule extended_unanimity_rule();
AggregationRule serial_choice_rule(DictatorSequence seq);

/// "borda", "min", "max", "tau-u". Throws invalid-argument otherwise.
AggregationRule rule_by_name(const std::string& name);
/// Parses "C,M,C" / "child,matchmaker" style sequences.
DictatorSequence parse_sequence(const std::string& text);

/// The single-ranking problem (M, tau): aggregated rankings stand in for both
/// the preference and the evaluation profile.
Problem aggregate_problem(const Problem& problem, const AggregationRule& rule);

enum class CheckMode { kExhaustive, kSampled };

struct WppCounterexample {
  char clause = 'a';  // 'a' pairwise, 'b' unacceptable kept out, 'c' acceptable kept in
  StrictRanking pref;
  StrictRanking eval;
  StrictRanking output;
  HomeId h;
  std::optional<HomeId> other;
};

/// Checks the weak Pareto principle over ranking pairs on `home_count` homes.
/// Exhaustive mode covers every pair of (possibly truncated) rankings and is
/// limited to four homes.
std::optional<WppCounterexample> satisfies_wpp(const AggregationRule& rule, std::size_t home_count,
                                               CheckMode mode, std::uint64_t samples = 10000,
                                               std::uint64_t seed = 1);

/// Checks the WPP clauses for one input pair and its output.
std::optional<WppCounterexample> wpp_violation(const StrictRanking& pref, const StrictRanking& eval,
                                               const StrictRanking& output, std::span<const HomeId> homes);

}  // namespace unanimity
