#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "unanimity/aggregation.hpp"
#include "unanimity/mechanisms.hpp"
#include "unanimity/types.hpp"

namespace unanimity::oracle {

/// Default ceiling on enumerated matchings or profiles before a search gives
/// up with a resource-limit error.
inline constexpr std::uint64_t kDefaultCap = 10'000'000;

// ---- enumeration ----------------------------------------------------------

/// Visits every feasible one-to-one partial assignment exactly once.
void for_each_matching(const Market& market, const std::function<void(const Matching&)>& visit,
                       std::uint64_t cap = kDefaultCap);
std::vector<Matching> enumerate_matchings(const Market& market, std::uint64_t cap = kDefaultCap);
/// Matchings in which every matched child holds a unanimously acceptable home.
std::vector<Matching> acceptable_matchings(const Problem& problem, std::uint64_t cap = kDefaultCap);

/// Every problem on `market` whose rankings are drawn from the given spaces
/// (the same spaces for every child).
void for_each_problem(const Market& market, const std::vector<StrictRanking>& pref_space,
                      const std::vector<StrictRanking>& eval_space,
                      const std::function<void(const Problem&)>& visit, std::uint64_t cap = kDefaultCap);

// ---- desiderata -----------------------------------------------------------

/// Not unanimously dominated by any acceptable matching. μ must be acceptable.
bool is_unanimous(const Problem& problem, const Matching& m);
std::vector<Matching> unanimous_matchings(const Problem& problem);
bool is_efficient(const Problem& problem, const Matching& m, PrefOrEval order = PrefOrEval::kPreference);
/// No acceptable Pareto improvement (under `order`) that keeps I* and kappa.
bool is_constrained_efficient(const Problem& problem, const Matching& m,
                              PrefOrEval order = PrefOrEval::kPreference);
/// No acceptable μ' with I(c, μ'(c)) ⊆ I(c, μ(c)) for all c and μ'(c') an
/// improver of μ(c') for some c'.
bool is_unimprovable(const Problem& problem, const Matching& m);

/// Pareto efficiency for weak rankings (ties allowed) over all feasible matchings.
bool is_efficient_weak(const Market& market, std::span<const WeakRanking> profile, const Matching& m);
/// The unanimous rankings of every child over her feasible homes.
std::vector<WeakRanking> unanimous_profile(const Problem& problem);

// ---- literal set-based algorithms -------------------------------------------

/// Terminal set of the set-based SDI run on the unanimous rankings.
std::vector<Matching> sdi_outcome_set(const Problem& problem, const DictatorOrder& order);
/// Terminal set of the set-based adaptive SDI.
std::vector<Matching> asdi_outcome_set(const Problem& problem, const DictatorOrder& order);

// ---- manipulation ---------------------------------------------------------

using Mechanism = std::function<Matching(const Problem&)>;

/// Maps one child's (preference, evaluation) report to a representative that
/// the mechanism cannot tell apart from it. Used to deduplicate profile spaces.
using ReportCanonicalizer =
    std::function<std::pair<StrictRanking, StrictRanking>(const StrictRanking&, const StrictRanking&)>;

/// All realizations of a mechanism with free parameters (dictator orders,
/// tie-breaks). Consistent sets quantify over every variant.
struct MechanismFamily {
  std::string name;
  std::vector<Mechanism> variants;
  ReportCanonicalizer canonical;  // empty means identity
};

struct FamilyOptions {
  std::vector<TieBreakPolicy> ties{TieBreakPolicy::kByEvaluation, TieBreakPolicy::kByPreference,
                                   TieBreakPolicy::kByHomeId};
  /// Restrict to one dictator order instead of every permutation.
  std::optional<DictatorOrder> fixed_order;
};

/// Keeps only the homes both rankings list, in each ranking's own order.
std::pair<StrictRanking, StrictRanking> unanimity_canonical(const StrictRanking& pref,
                                                            const StrictRanking& eval);

MechanismFamily sdi_family(std::size_t child_count, FamilyOptions options = {});
MechanismFamily asdi_family(std::size_t child_count, FamilyOptions options = {});
MechanismFamily uttc_family(std::size_t child_count, PointingOrder pointing, FamilyOptions options = {});
MechanismFamily sd_family(std::size_t child_count, PrefOrEval ranking = PrefOrEval::kPreference,
                          std::optional<DictatorOrder> fixed_order = std::nullopt);

enum class ManipulationKind { kProfitable, kWorstCase, kBestCase, kGroupImproving };
enum class Manipulator { kChild, kMatchmaker };
const char* to_string(ManipulationKind kind);
const char* to_string(Manipulator who);

struct ManipulationReport {
  ManipulationKind kind = ManipulationKind::kProfitable;
  Manipulator manipulator = Manipulator::kChild;
  ChildId child;
  StrictRanking truth;
  StrictRanking misreport;
  Matching truthful_outcome;
  Matching manipulated_outcome;
};

struct SearchOptions {
  std::uint64_t cap = kDefaultCap;
  /// Child misreports range over rankings of every subset of homes.
  bool truncations = true;
};

/// First profitable preference misreport, scanning children in id order and
/// misreports in lexicographic order.
std::optional<ManipulationReport> find_sp_violation(const Mechanism& mechanism, const Problem& problem,
                                                    std::optional<ChildId> child = std::nullopt,
                                                    SearchOptions options = {});

struct ConsistentSets {
  std::vector<Matching> cu;
  std::vector<Matching> worst;  // CU-
  std::vector<Matching> best;   // CU+
};

/// Outcomes over every opponent profile and every family variant with c's own
/// report fixed. Worst and best are judged by `pref`.
ConsistentSets consistent_sets(const MechanismFamily& family, const Market& market, ChildId c,
                               const StrictRanking& pref, const StrictRanking& eval,
                               SearchOptions options = {});

/// Worst- and best-case manipulation search for one child. Outcome sets are
/// cached per canonical report so repeated queries on one market are cheap.
class ObviousManipulationSearch {
 public:
  ObviousManipulationSearch(MechanismFamily family, Market market, ChildId child,
                            SearchOptions options = {});

  /// Homes (and the outside option) c can end up with under some consistent
  /// profile, each with one witnessing matching.
  const std::map<std::int32_t, Matching>& outcomes(const StrictRanking& pref, const StrictRanking& eval);

  /// Whether `misreport` improves c's worst or best case under `pref`.
  std::optional<ManipulationReport> check(const StrictRanking& pref, const StrictRanking& eval,
                                          const StrictRanking& misreport);
  /// Every obvious manipulation, misreports in lexicographic order.
  std::vector<ManipulationReport> find_all(const StrictRanking& pref, const StrictRanking& eval);
  std::optional<ManipulationReport> find_first(const StrictRanking& pref, const StrictRanking& eval);

  const std::vector<StrictRanking>& misreports() const { return misreports_; }
  std::size_t opponent_profiles() const { return opponents_; }

 private:
  std::pair<StrictRanking, StrictRanking> canon(const StrictRanking& p, const StrictRanking& e) const;

  MechanismFamily family_;
  Market market_;
  ChildId child_;
  SearchOptions options_;
  std::vector<std::vector<std::pair<StrictRanking, StrictRanking>>> opponent_space_;
  std::size_t opponents_ = 1;
  std::vector<StrictRanking> misreports_;
  std::map<std::pair<StrictRanking, StrictRanking>, std::map<std::int32_t, Matching>> cache_;
};

std::optional<ManipulationReport> find_obvious_manipulation(const MechanismFamily& family,
                                                            const Market& market, ChildId c,
                                                            const StrictRanking& pref,
                                                            const StrictRanking& eval,
                                                            SearchOptions options = {});

/// Group-robustness search for a mechanism run on the aggregated problem:
/// child misreports that help the child under her preference and harm nobody
/// else, then matchmaker misreports that help a child under the evaluation
/// and harm nobody else under theirs.
std::optional<ManipulationReport> find_group_robustness_violation(const Mechanism& mechanism,
                                                                  const AggregationRule& rule,
                                                                  const Problem& problem,
                                                                  SearchOptions options = {});

struct IiaCounterexample {
  std::string clause;  // "IWA" or "IUA"
  Problem problem;
  ChildId child;
  StrictRanking misreport;
  Matching before;
  Matching after;
};

/// Independence of worse alternatives and of unmatched alternatives over a
/// family of problems, with every preference misreport of every child.
std::optional<IiaCounterexample> check_iia(const Mechanism& mechanism, std::span<const Problem> family,
                                           SearchOptions options = {});

}  // namespace unanimity::oracle
