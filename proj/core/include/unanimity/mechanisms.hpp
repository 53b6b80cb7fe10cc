#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "unanimity/types.hpp"

namespace unanimity {

/// A permutation of the market's children; earlier entries choose first.
using DictatorOrder = std::vector<ChildId>;

/// Resolves which home inside a committed indifference tier a child receives.
enum class TieBreakPolicy { kByEvaluation, kByPreference, kByHomeId };

/// Which ranking UTTC uses when children point.
using PointingOrder = PrefOrEval;

/// Home-indexed availability draw: avail[h] != 0 means h can be assigned.
using AvailabilityFn = std::vector<std::uint8_t>;

void validate_order(const Market& market, const DictatorOrder& order);
DictatorOrder identity_order(const Market& market);

/// Serial dictatorship: each dictator takes her best remaining home under the
/// chosen ranking, or stays unmatched.
Matching sd(const Problem& problem, const DictatorOrder& order,
            PrefOrEval ranking = PrefOrEval::kPreference);

/// What each dictator locked in: the set of homes she is guaranteed one of,
/// or std::nullopt when she stays unmatched.
struct Commitments {
  std::vector<std::optional<std::vector<HomeId>>> homes;  // indexed by ChildId
  /// ASDI only: the remaining-home set H^n seen by each dictator.
  std::vector<std::vector<HomeId>> remaining;              // indexed by ChildId
};

/// Serial dictatorship over the two-tier unanimous ranking. Each dictator
/// commits to her best tier that can still be honoured alongside all earlier
/// commitments; the final matching is realized under `tie`.
Matching sdi(const Problem& problem, const DictatorOrder& order,
             TieBreakPolicy tie = TieBreakPolicy::kByEvaluation);
Commitments sdi_commitments(const Problem& problem, const DictatorOrder& order);

/// Adaptive SDI: each dictator's tiers are recomputed over the homes that are
/// still free in some matching consistent with earlier commitments.
Matching asdi(const Problem& problem, const DictatorOrder& order,
              TieBreakPolicy tie = TieBreakPolicy::kByEvaluation);
Commitments asdi_commitments(const Problem& problem, const DictatorOrder& order);

/// Realizes commitments in dictator order: each child takes the best home of
/// her set (under `tie`) that keeps the remaining commitments satisfiable.
Matching realize(const Problem& problem, const DictatorOrder& order, const Commitments& commitments,
                 TieBreakPolicy tie);

/// True when every committed child can be given a home from her set at once.
bool commitments_satisfiable(const Problem& problem, const Commitments& commitments);

struct UttcOptions {
  PointingOrder pointing = PointingOrder::kEvaluation;
  /// Reject initial matchings that are not unanimous.
  bool check_initial = true;
};

/// Unanimous top trading cycles starting from a unanimous matching.
Matching uttc(const Problem& problem, const Matching& initial, UttcOptions options = {});

/// Random serial assignment: every child independently receives her best
/// available acceptable home. Homes may be assigned to several children, so
/// the result is generally not a one-to-one matching.
Matching rsa(const Problem& problem, const AvailabilityFn& avail);

/// The home a single report would receive under RSA.
Slot rsa_choice(const StrictRanking& report, const AvailabilityFn& avail);

}  // namespace unanimity
