#include "unanimity/oracle.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "unanimity/enumerate.hpp"
#include "unanimity/errors.hpp"
#include "unanimity/unanimity.hpp"

namespace unanimity::oracle {

namespace {

constexpr auto kPref = PrefOrEval::kPreference;
constexpr auto kEval = PrefOrEval::kEvaluation;

void check_cap(std::uint64_t count, std::uint64_t cap, const char* what) {
  if (count > cap) fail(ErrorCode::kResourceLimit, std::string(what) + " exceeds the enumeration cap");
}

// Per-child classification computed from the definitions, one entry per slot
// (homes, then the outside option last).
struct Definitions {
  std::size_t homes = 0;
  std::vector<std::uint8_t> tier;          // 0 H*, 1 H-, 2 outside option, 3 unacceptable
  std::vector<std::vector<bool>> improver;  // improver[c*(k+1)+slot][h]

  explicit Definitions(const Problem& problem) : homes(problem.home_count()) {
    const auto n = problem.child_count();
    tier.assign(n * (homes + 1), 3);
    improver.assign(n * (homes + 1), std::vector<bool>(homes, false));
    for (ChildId c : problem.market().children()) {
      const auto classes = classify_homes(problem, c);
      for (HomeId h : classes.unanimous) tier[index(c, h)] = 0;
      for (HomeId h : classes.non_unanimous) tier[index(c, h)] = 1;
      tier[index(c, std::nullopt)] = 2;
      for (HomeId h : problem.market().feasible_homes(c)) {
        for (HomeId i : improvers(problem, c, h)) improver[index(c, h)][i.value] = true;
      }
      for (HomeId i : improvers(problem, c, std::nullopt)) improver[index(c, std::nullopt)][i.value] = true;
    }
  }

  std::size_t index(ChildId c, Slot h) const { return c.value * (homes + 1) + (h ? h->value : homes); }
  int tier_of(ChildId c, Slot h) const { return tier[index(c, h)]; }
  bool is_improver(ChildId c, Slot from, Slot to) const {
    return to && improver[index(c, from)][to->value];
  }
  bool improvers_subset(ChildId c, Slot inner, Slot outer) const {
    const auto& a = improver[index(c, inner)];
    const auto& b = improver[index(c, outer)];
    for (std::size_t h = 0; h < homes; ++h) {
      if (a[h] && !b[h]) return false;
    }
    return true;
  }
};

struct Coalitions {
  std::vector<bool> star;
  std::vector<bool> kappa;
};

Coalitions coalitions(const Definitions& defs, const Matching& m) {
  Coalitions out;
  for (std::uint32_t c = 0; c < m.child_count(); ++c) {
    const int t = defs.tier_of(ChildId{c}, m[ChildId{c}]);
    out.star.push_back(t == 0);
    out.kappa.push_back(t <= 1);
  }
  return out;
}

// 1 strict superset, 0 equal, -1 otherwise
int compare_sets(const std::vector<bool>& big, const std::vector<bool>& small) {
  bool strict = false;
  for (std::size_t i = 0; i < big.size(); ++i) {
    if (small[i] && !big[i]) return -1;
    strict |= big[i] && !small[i];
  }
  return strict ? 1 : 0;
}

bool weakly_expands(const Coalitions& next, const Coalitions& base) {
  return compare_sets(next.star, base.star) >= 0 && compare_sets(next.kappa, base.kappa) >= 0;
}

bool dominates(const Coalitions& next, const Coalitions& base) {
  const int s = compare_sets(next.star, base.star);
  const int k = compare_sets(next.kappa, base.kappa);
  return s >= 0 && k >= 0 && (s + k) > 0;
}

// every child weakly better, someone strictly, under one strict ranking profile
bool pareto(const Problem& problem, PrefOrEval order, const Matching& next, const Matching& base) {
  bool strict = false;
  for (ChildId c : problem.market().children()) {
    const Slot a = next[c], b = base[c];
    if (a == b) continue;
    if (!problem.prefers(order, c, a, b)) return false;
    strict = true;
  }
  return strict;
}

void require_acceptable(const Problem& problem, const Matching& m) {
  m.validate(problem.market());
  require(is_acceptable(problem, m), ErrorCode::kInvalidArgument,
          "the matching assigns a home that is not unanimously acceptable");
}

std::vector<bool> free_homes_in_some(const std::vector<Matching>& set, std::size_t home_count) {
  std::vector<bool> out(home_count, false);
  for (const auto& m : set) {
    std::vector<bool> used(home_count, false);
    for (std::uint32_t c = 0; c < m.child_count(); ++c) {
      if (auto h = m[ChildId{c}]) used[h->value] = true;
    }
    for (std::size_t h = 0; h < home_count; ++h) out[h] = out[h] || !used[h];
  }
  return out;
}

// keeps the members that c ranks best; the best may be the outside option
template <class Key>
std::vector<Matching> keep_best(const std::vector<Matching>& set, ChildId c, Key key) {
  int best = std::numeric_limits<int>::max();
  for (const auto& m : set) best = std::min(best, key(m[c]));
  std::vector<Matching> out;
  for (const auto& m : set) {
    if (key(m[c]) == best) out.push_back(m);
  }
  return out;
}

std::int32_t slot_code(Slot s) { return s ? static_cast<std::int32_t>(s->value) : -1; }
Slot code_slot(std::int32_t v) { return v < 0 ? Slot{} : Slot{HomeId{static_cast<std::uint32_t>(v)}}; }

// position under a ranking with the outside option after the list and
// unlisted homes after that; smaller is better
std::size_t order_key(const StrictRanking& r, Slot s) {
  if (!s) return r.size();
  auto p = r.position(*s);
  return p ? *p : r.size() + 1;
}

std::vector<DictatorOrder> orders_for(std::size_t n, const std::optional<DictatorOrder>& fixed) {
  if (fixed) return {*fixed};
  DictatorOrder order;
  for (std::uint32_t c = 0; c < n; ++c) order.emplace_back(c);
  std::vector<DictatorOrder> out;
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

}  // namespace

// ---- enumeration ----------------------------------------------------------

void for_each_matching(const Market& market, const std::function<void(const Matching&)>& visit,
                       std::uint64_t cap) {
  const auto n = market.child_count();
  std::vector<std::vector<HomeId>> options(n);
  for (ChildId c : market.children()) options[c.value] = market.feasible_homes(c);
  Matching m(n);
  std::vector<bool> used(market.home_count(), false);
  std::uint64_t visited = 0;
  std::function<void(std::uint32_t)> step = [&](std::uint32_t c) {
    if (c == n) {
      check_cap(++visited, cap, "matching enumeration");
      visit(m);
      return;
    }
    m.assign(ChildId{c}, std::nullopt);
    step(c + 1);
    for (HomeId h : options[c]) {
      if (used[h.value]) continue;
      used[h.value] = true;
      m.assign(ChildId{c}, h);
      step(c + 1);
      used[h.value] = false;
    }
    m.assign(ChildId{c}, std::nullopt);
  };
  step(0);
}

std::vector<Matching> enumerate_matchings(const Market& market, std::uint64_t cap) {
  std::vector<Matching> out;
  for_each_matching(market, [&](const Matching& m) { out.push_back(m); }, cap);
  return out;
}

std::vector<Matching> acceptable_matchings(const Problem& problem, std::uint64_t cap) {
  std::vector<Matching> out;
  for_each_matching(
      problem.market(),
      [&](const Matching& m) {
        if (is_acceptable(problem, m)) out.push_back(m);
      },
      cap);
  return out;
}

void for_each_problem(const Market& market, const std::vector<StrictRanking>& pref_space,
                      const std::vector<StrictRanking>& eval_space,
                      const std::function<void(const Problem&)>& visit, std::uint64_t cap) {
  const auto n = market.child_count();
  const std::uint64_t per_child = pref_space.size() * eval_space.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= per_child;
    check_cap(total, cap, "problem enumeration");
  }
  std::vector<std::size_t> digit(2 * n, 0);
  std::vector<StrictRanking> prefs(n), evals(n);
  for (std::uint64_t i = 0; i < total; ++i) {
    for (std::size_t c = 0; c < n; ++c) {
      prefs[c] = pref_space[digit[2 * c]];
      evals[c] = eval_space[digit[2 * c + 1]];
    }
    visit(Problem(market, prefs, evals));
    for (std::size_t d = 0; d < digit.size(); ++d) {
      const auto base = d % 2 == 0 ? pref_space.size() : eval_space.size();
      if (++digit[d] < base) break;
      digit[d] = 0;
    }
  }
}

// ---- desiderata -----------------------------------------------------------

bool is_unanimous(const Problem& problem, const Matching& m) {
  require_acceptable(problem, m);
  const Definitions defs(problem);
  const auto base = coalitions(defs, m);
  bool dominated = false;
  for_each_matching(problem.market(), [&](const Matching& other) {
    if (dominated || !is_acceptable(problem, other)) return;
    dominated = dominates(coalitions(defs, other), base);
  });
  return !dominated;
}

std::vector<Matching> unanimous_matchings(const Problem& problem) {
  const Definitions defs(problem);
  const auto all = acceptable_matchings(problem);
  std::vector<Coalitions> sets;
  for (const auto& m : all) sets.push_back(coalitions(defs, m));
  std::vector<Matching> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < all.size() && !dominated; ++j) dominated = dominates(sets[j], sets[i]);
    if (!dominated) out.push_back(all[i]);
  }
  return out;
}

bool is_efficient(const Problem& problem, const Matching& m, PrefOrEval order) {
  m.validate(problem.market());
  bool dominated = false;
  for_each_matching(problem.market(), [&](const Matching& other) {
    if (!dominated) dominated = pareto(problem, order, other, m);
  });
  return !dominated;
}

bool is_constrained_efficient(const Problem& problem, const Matching& m, PrefOrEval order) {
  require_acceptable(problem, m);
  const Definitions defs(problem);
  const auto base = coalitions(defs, m);
  bool dominated = false;
  for_each_matching(problem.market(), [&](const Matching& other) {
    if (dominated || !is_acceptable(problem, other)) return;
    dominated = pareto(problem, order, other, m) && weakly_expands(coalitions(defs, other), base);
  });
  return !dominated;
}

bool is_unimprovable(const Problem& problem, const Matching& m) {
  require_acceptable(problem, m);
  const Definitions defs(problem);
  const auto children = problem.market().children();
  bool improvable = false;
  for_each_matching(problem.market(), [&](const Matching& other) {
    if (improvable || !is_acceptable(problem, other)) return;
    bool some = false;
    for (ChildId c : children) {
      if (!defs.improvers_subset(c, other[c], m[c])) return;
      some = some || defs.is_improver(c, m[c], other[c]);
    }
    improvable = some;
  });
  return !improvable;
}

bool is_efficient_weak(const Market& market, std::span<const WeakRanking> profile, const Matching& m) {
  m.validate(market);
  require(profile.size() == market.child_count(), ErrorCode::kInvalidArgument,
          "one weak ranking per child is required");
  bool dominated = false;
  for_each_matching(market, [&](const Matching& other) {
    if (dominated) return;
    bool strict = false;
    for (ChildId c : market.children()) {
      const int cmp = profile[c.value].compare(other[c], m[c]);
      if (cmp < 0) return;
      // two different unlisted homes tie by key but are not acceptable moves
      if (cmp == 0 && other[c] != m[c] && other[c] && !profile[c.value].tier_of(*other[c])) return;
      strict = strict || cmp > 0;
    }
    dominated = strict;
  });
  return !dominated;
}

std::vector<WeakRanking> unanimous_profile(const Problem& problem) {
  std::vector<WeakRanking> out;
  for (ChildId c : problem.market().children()) out.push_back(unanimous_ranking(problem, c));
  return out;
}

// ---- literal set-based algorithms -------------------------------------------

std::vector<Matching> sdi_outcome_set(const Problem& problem, const DictatorOrder& order) {
  validate_order(problem.market(), order);
  const auto profile = unanimous_profile(problem);
  auto set = acceptable_matchings(problem);
  for (ChildId c : order) {
    const auto& ranking = profile[c.value];
    set = keep_best(set, c, [&](Slot s) {
      if (!s) return static_cast<int>(ranking.tier_count());
      auto t = ranking.tier_of(*s);
      return t ? static_cast<int>(*t) : static_cast<int>(ranking.tier_count()) + 1;
    });
    const auto free = free_homes_in_some(set, problem.home_count());
    if (std::none_of(free.begin(), free.end(), [](bool b) { return b; })) break;
  }
  std::sort(set.begin(), set.end());
  return set;
}

std::vector<Matching> asdi_outcome_set(const Problem& problem, const DictatorOrder& order) {
  validate_order(problem.market(), order);
  auto set = acceptable_matchings(problem);
  std::vector<bool> remaining(problem.home_count(), true);
  for (ChildId c : order) {
    std::vector<HomeId> domain;
    for (HomeId h : problem.market().feasible_homes(c)) {
      if (remaining[h.value]) domain.push_back(h);
    }
    const auto ranking = unanimous_ranking(problem, c, domain);
    set = keep_best(set, c, [&](Slot s) {
      if (!s) return static_cast<int>(ranking.tier_count());
      auto t = ranking.tier_of(*s);
      return t ? static_cast<int>(*t) : static_cast<int>(ranking.tier_count()) + 1;
    });
    remaining = free_homes_in_some(set, problem.home_count());
    if (std::none_of(remaining.begin(), remaining.end(), [](bool b) { return b; })) break;
  }
  std::sort(set.begin(), set.end());
  return set;
}

// ---- mechanism families ---------------------------------------------------

std::pair<StrictRanking, StrictRanking> unanimity_canonical(const StrictRanking& pref,
                                                            const StrictRanking& eval) {
  std::vector<HomeId> p, e;
  for (HomeId h : pref) {
    if (eval.contains(h)) p.push_back(h);
  }
  for (HomeId h : eval) {
    if (pref.contains(h)) e.push_back(h);
  }
  return {StrictRanking(std::move(p)), StrictRanking(std::move(e))};
}

MechanismFamily sdi_family(std::size_t child_count, FamilyOptions options) {
  MechanismFamily out{"sdi", {}, unanimity_canonical};
  for (const auto& order : orders_for(child_count, options.fixed_order)) {
    for (auto tie : options.ties) {
      out.variants.push_back([order, tie](const Problem& p) { return sdi(p, order, tie); });
    }
  }
  return out;
}

MechanismFamily asdi_family(std::size_t child_count, FamilyOptions options) {
  MechanismFamily out{"asdi", {}, unanimity_canonical};
  for (const auto& order : orders_for(child_count, options.fixed_order)) {
    for (auto tie : options.ties) {
      out.variants.push_back([order, tie](const Problem& p) { return asdi(p, order, tie); });
    }
  }
  return out;
}

MechanismFamily uttc_family(std::size_t child_count, PointingOrder pointing, FamilyOptions options) {
  MechanismFamily out{"uttc", {}, unanimity_canonical};
  for (const auto& order : orders_for(child_count, options.fixed_order)) {
    for (auto tie : options.ties) {
      out.variants.push_back([order, tie, pointing](const Problem& p) {
        return uttc(p, sdi(p, order, tie), UttcOptions{pointing, false});
      });
    }
  }
  return out;
}

MechanismFamily sd_family(std::size_t child_count, PrefOrEval ranking, std::optional<DictatorOrder> fixed_order) {
  MechanismFamily out{ranking == kPref ? "sd" : "sd-opt", {}, {}};
  for (const auto& order : orders_for(child_count, fixed_order)) {
    out.variants.push_back([order, ranking](const Problem& p) { return sd(p, order, ranking); });
  }
  out.canonical = [ranking](const StrictRanking& p, const StrictRanking& e) {
    return ranking == kPref ? std::pair{p, StrictRanking{}} : std::pair{StrictRanking{}, e};
  };
  return out;
}

const char* to_string(ManipulationKind kind) {
  switch (kind) {
    case ManipulationKind::kProfitable: return "profitable";
    case ManipulationKind::kWorstCase: return "worst-case";
    case ManipulationKind::kBestCase: return "best-case";
    case ManipulationKind::kGroupImproving: return "group-improving";
  }
  return "unknown";
}

const char* to_string(Manipulator who) { return who == Manipulator::kChild ? "child" : "matchmaker"; }

// ---- strategy-proofness -----------------------------------------------------

std::optional<ManipulationReport> find_sp_violation(const Mechanism& mechanism, const Problem& problem,
                                                    std::optional<ChildId> child, SearchOptions options) {
  const auto truthful = mechanism(problem);
  std::vector<ChildId> children = child ? std::vector<ChildId>{*child} : problem.market().children();
  std::uint64_t runs = 0;
  for (ChildId c : children) {
    require(problem.market().contains(c), ErrorCode::kInvalidArgument, "unknown child");
    const auto homes = problem.market().feasible_homes(c);
    for (const auto& lie : all_rankings(homes, options.truncations)) {
      if (lie == problem.pref(c)) continue;
      check_cap(++runs, options.cap, "misreport search");
      const auto outcome = mechanism(problem.with_pref(c, lie));
      if (problem.prefers(kPref, c, outcome[c], truthful[c])) {
        return ManipulationReport{ManipulationKind::kProfitable, Manipulator::kChild, c, problem.pref(c),
                                  lie, truthful, outcome};
      }
    }
  }
  return std::nullopt;
}

// ---- obvious manipulability -------------------------------------------------

ObviousManipulationSearch::ObviousManipulationSearch(MechanismFamily family, Market market, ChildId child,
                                                     SearchOptions options)
    : family_(std::move(family)), market_(std::move(market)), child_(child), options_(options) {
  require(market_.contains(child_), ErrorCode::kInvalidArgument, "unknown child");
  require(!family_.variants.empty(), ErrorCode::kInvalidArgument, "mechanism family has no variants");
  for (ChildId c : market_.children()) {
    if (c == child_) continue;
    const auto homes = market_.feasible_homes(c);
    const auto rankings = all_rankings(homes, true);
    std::set<std::pair<StrictRanking, StrictRanking>> distinct;
    for (const auto& p : rankings) {
      for (const auto& e : rankings) distinct.insert(canon(p, e));
    }
    opponent_space_.emplace_back(distinct.begin(), distinct.end());
    opponents_ *= opponent_space_.back().size();
    check_cap(opponents_ * family_.variants.size(), options_.cap, "opponent profile space");
  }
  misreports_ = all_rankings(market_.feasible_homes(child_), options_.truncations);
}

std::pair<StrictRanking, StrictRanking> ObviousManipulationSearch::canon(const StrictRanking& p,
                                                                         const StrictRanking& e) const {
  return family_.canonical ? family_.canonical(p, e) : std::pair{p, e};
}

const std::map<std::int32_t, Matching>& ObviousManipulationSearch::outcomes(const StrictRanking& pref,
                                                                          const StrictRanking& eval) {
  const auto key = canon(pref, eval);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;

  const auto n = market_.child_count();
  std::vector<StrictRanking> prefs(n), evals(n);
  prefs[child_.value] = key.first;
  evals[child_.value] = key.second;
  std::vector<ChildId> others;
  for (ChildId c : market_.children()) {
    if (c != child_) others.push_back(c);
  }
  std::map<std::int32_t, Matching> found;
  std::vector<std::size_t> digit(others.size(), 0);
  for (std::size_t i = 0; i < opponents_; ++i) {
    for (std::size_t j = 0; j < others.size(); ++j) {
      const auto& [p, e] = opponent_space_[j][digit[j]];
      prefs[others[j].value] = p;
      evals[others[j].value] = e;
    }
    const Problem problem(market_, prefs, evals);
    for (const auto& variant : family_.variants) {
      auto m = variant(problem);
      found.try_emplace(slot_code(m[child_]), std::move(m));
    }
    for (std::size_t j = 0; j < digit.size(); ++j) {
      if (++digit[j] < opponent_space_[j].size()) break;
      digit[j] = 0;
    }
  }
  return cache_.emplace(key, std::move(found)).first->second;
}

std::optional<ManipulationReport> ObviousManipulationSearch::check(const StrictRanking& pref,
                                                                   const StrictRanking& eval,
                                                                   const StrictRanking& misreport) {
  auto extremes = [&](const std::map<std::int32_t, Matching>& found) {
    const Matching* worst = nullptr;
    const Matching* best = nullptr;
    std::size_t worst_key = 0, best_key = 0;
    for (const auto& [code, m] : found) {
      const auto k = order_key(pref, code_slot(code));
      if (!worst || k > worst_key) worst = &m, worst_key = k;
      if (!best || k < best_key) best = &m, best_key = k;
    }
    return std::tuple{worst, worst_key, best, best_key};
  };
  // copy the truthful extremes first: the second lookup may grow the cache
  const auto [tw, twk, tb, tbk] = extremes(outcomes(pref, eval));
  const Matching truth_worst = *tw, truth_best = *tb;
  const auto [mw, mwk, mb, mbk] = extremes(outcomes(misreport, eval));
  if (mwk < twk) {
    return ManipulationReport{ManipulationKind::kWorstCase, Manipulator::kChild, child_, pref, misreport,
                              truth_worst, *mw};
  }
  if (mbk < tbk) {
    return ManipulationReport{ManipulationKind::kBestCase, Manipulator::kChild, child_, pref, misreport,
                              truth_best, *mb};
  }
  return std::nullopt;
}

std::vector<ManipulationReport> ObviousManipulationSearch::find_all(const StrictRanking& pref,
                                                                    const StrictRanking& eval) {
  std::vector<ManipulationReport> out;
  for (const auto& lie : misreports_) {
    if (lie == pref) continue;
    if (auto r = check(pref, eval, lie)) out.push_back(std::move(*r));
  }
  return out;
}

std::optional<ManipulationReport> ObviousManipulationSearch::find_first(const StrictRanking& pref,
                                                                        const StrictRanking& eval) {
  for (const auto& lie : misreports_) {
    if (lie == pref) continue;
    if (auto r = check(pref, eval, lie)) return r;
  }
  return std::nullopt;
}

ConsistentSets consistent_sets(const MechanismFamily& family, const Market& market, ChildId c,
                               const StrictRanking& pref, const StrictRanking& eval, SearchOptions options) {
  // all distinct matchings, not just one witness per slot
  const auto n = market.child_count();
  std::vector<ChildId> others;
  for (ChildId o : market.children()) {
    if (o != c) others.push_back(o);
  }
  std::vector<std::vector<std::pair<StrictRanking, StrictRanking>>> space;
  std::size_t total = 1;
  for (ChildId o : others) {
    const auto rankings = all_rankings(market.feasible_homes(o), true);
    std::set<std::pair<StrictRanking, StrictRanking>> distinct;
    for (const auto& p : rankings) {
      for (const auto& e : rankings) {
        distinct.insert(family.canonical ? family.canonical(p, e) : std::pair{p, e});
      }
    }
    space.emplace_back(distinct.begin(), distinct.end());
    total *= space.back().size();
    check_cap(total * family.variants.size(), options.cap, "opponent profile space");
  }
  std::set<Matching> cu;
  std::vector<StrictRanking> prefs(n), evals(n);
  prefs[c.value] = pref;
  evals[c.value] = eval;
  std::vector<std::size_t> digit(others.size(), 0);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < others.size(); ++j) {
      prefs[others[j].value] = space[j][digit[j]].first;
      evals[others[j].value] = space[j][digit[j]].second;
    }
    const Problem problem(market, prefs, evals);
    for (const auto& variant : family.variants) cu.insert(variant(problem));
    for (std::size_t j = 0; j < digit.size(); ++j) {
      if (++digit[j] < space[j].size()) break;
      digit[j] = 0;
    }
  }
  ConsistentSets out;
  out.cu.assign(cu.begin(), cu.end());
  if (out.cu.empty()) return out;
  std::size_t worst = 0, best = std::numeric_limits<std::size_t>::max();
  for (const auto& m : out.cu) {
    const auto k = order_key(pref, m[c]);
    worst = std::max(worst, k);
    best = std::min(best, k);
  }
  for (const auto& m : out.cu) {
    const auto k = order_key(pref, m[c]);
    if (k == worst) out.worst.push_back(m);
    if (k == best) out.best.push_back(m);
  }
  return out;
}

std::optional<ManipulationReport> find_obvious_manipulation(const MechanismFamily& family,
                                                            const Market& market, ChildId c,
                                                            const StrictRanking& pref,
                                                            const StrictRanking& eval,
                                                            SearchOptions options) {
  ObviousManipulationSearch search(family, market, c, options);
  return search.find_first(pref, eval);
}

// ---- group robustness -------------------------------------------------------

std::optional<ManipulationReport> find_group_robustness_violation(const Mechanism& mechanism,
                                                                  const AggregationRule& rule,
                                                                  const Problem& problem,
                                                                  SearchOptions options) {
  const auto& market = problem.market();
  const auto n = problem.child_count();
  std::vector<StrictRanking> base(n);
  for (ChildId c : market.children()) {
    base[c.value] = rule(problem.pref(c), problem.eval(c), market.feasible_homes(c));
  }
  auto run = [&](const std::vector<StrictRanking>& t) { return mechanism(Problem(market, t, t)); };
  const auto truthful = run(base);
  std::uint64_t runs = 0;

  auto harms_nobody = [&](ChildId c, PrefOrEval order, const Matching& after) {
    for (ChildId o : market.children()) {
      if (o != c && problem.prefers(order, o, truthful[o], after[o])) return false;
    }
    return true;
  };

  for (ChildId c : market.children()) {
    const auto homes = market.feasible_homes(c);
    for (const auto& lie : all_rankings(homes, options.truncations)) {
      if (lie == problem.pref(c)) continue;
      check_cap(++runs, options.cap, "group robustness search");
      auto t = base;
      t[c.value] = rule(lie, problem.eval(c), homes);
      const auto after = run(t);
      if (problem.prefers(kPref, c, after[c], truthful[c]) && harms_nobody(c, kPref, after)) {
        return ManipulationReport{ManipulationKind::kGroupImproving, Manipulator::kChild, c,
                                  problem.pref(c), lie, truthful, after};
      }
    }
  }
  for (ChildId c : market.children()) {
    const auto homes = market.feasible_homes(c);
    for (const auto& lie : all_rankings(homes, false)) {
      if (lie == problem.eval(c)) continue;
      check_cap(++runs, options.cap, "group robustness search");
      auto t = base;
      t[c.value] = rule(problem.pref(c), lie, homes);
      const auto after = run(t);
      if (problem.prefers(kEval, c, after[c], truthful[c]) && harms_nobody(c, kEval, after)) {
        return ManipulationReport{ManipulationKind::kGroupImproving, Manipulator::kMatchmaker, c,
                                  problem.eval(c), lie, truthful, after};
      }
    }
  }
  return std::nullopt;
}

// ---- independence of irrelevant alternatives --------------------------------

std::optional<IiaCounterexample> check_iia(const Mechanism& mechanism, std::span<const Problem> family,
                                           SearchOptions options) {
  std::uint64_t runs = 0;
  for (const auto& problem : family) {
    const auto before = mechanism(problem);
    const auto k = problem.home_count();
    for (ChildId c : problem.market().children()) {
      const auto homes = problem.market().feasible_homes(c);
      const auto& truth = problem.pref(c);
      const Slot held = before[c];
      for (const auto& lie : all_rankings(homes, options.truncations)) {
        if (lie == truth) continue;
        check_cap(++runs, options.cap, "IIA search");
        const auto after = mechanism(problem.with_pref(c, lie));

        // alternatives (homes and the outside option) below the held one stay below
        bool keeps_lower = true;
        std::vector<Slot> alternatives{std::nullopt};
        for (std::uint32_t h = 0; h < k; ++h) alternatives.emplace_back(HomeId{h});
        for (Slot alt : alternatives) {
          if (alt == held) continue;
          if (truth.prefers(held, alt) && !lie.prefers(held, alt)) {
            keeps_lower = false;
            break;
          }
        }
        if (keeps_lower && after != before) {
          return IiaCounterexample{"IWA", problem, c, lie, before, after};
        }

        const auto holders_after = after.holders(k);
        const auto holders_before = before.holders(k);
        const bool old_free = !held || !holders_after[held->value];
        const bool new_free = !after[c] || !holders_before[after[c]->value];
        if (old_free && new_free) {
          for (ChildId o : problem.market().children()) {
            if (o != c && before[o] != after[o]) {
              return IiaCounterexample{"IUA", problem, c, lie, before, after};
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace unanimity::oracle
