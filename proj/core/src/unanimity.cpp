#include "unanimity/unanimity.hpp"

#include <algorithm>
#include <deque>

#include "unanimity/errors.hpp"

namespace unanimity {

namespace {

// position in a ranking; outside option at the list end, unlisted after it
std::size_t key(const StrictRanking& r, Slot h) {
  if (!h) return r.size();
  auto p = r.position(*h);
  return p ? *p : r.size() + 1;
}

bool unanimously_better(const StrictRanking& pref, const StrictRanking& eval, HomeId a, Slot b) {
  const auto pa = key(pref, a), pb = key(pref, b);
  const auto ea = key(eval, a), eb = key(eval, b);
  // two unlisted homes are incomparable, never strictly ordered
  const bool pref_better = pa < pb && pa <= pref.size();
  const bool eval_better = ea < eb && ea <= eval.size();
  return pref_better && eval_better;
}

void check_child(const Problem& problem, ChildId c) {
  require(problem.market().contains(c), ErrorCode::kInvalidArgument, "unknown child");
}

void check_slot(const Problem& problem, ChildId c, Slot h) {
  check_child(problem, c);
  if (h) {
    require(problem.market().contains(*h), ErrorCode::kInvalidArgument, "unknown home");
    require(problem.market().feasible(c, *h), ErrorCode::kInvalidArgument,
            "home is not feasible for the child");
  }
}

}  // namespace

std::vector<HomeId> improvers(const StrictRanking& pref, const StrictRanking& eval, Slot h,
                              std::span<const HomeId> domain) {
  std::vector<HomeId> out;
  for (HomeId candidate : domain) {
    if (h && candidate == *h) continue;
    if (unanimously_better(pref, eval, candidate, h)) out.push_back(candidate);
  }
  std::sort(out.begin(), out.end());
  return out;
}

HomeClasses classify_homes(const StrictRanking& pref, const StrictRanking& eval,
                           std::span<const HomeId> domain) {
  HomeClasses out;
  for (HomeId h : domain) {
    if (!pref.contains(h) || !eval.contains(h)) continue;
    if (improvers(pref, eval, h, domain).empty()) {
      out.unanimous.push_back(h);
    } else {
      out.non_unanimous.push_back(h);
    }
  }
  std::sort(out.unanimous.begin(), out.unanimous.end());
  std::sort(out.non_unanimous.begin(), out.non_unanimous.end());
  return out;
}

std::vector<HomeId> improvers(const Problem& problem, ChildId c, Slot h) {
  check_slot(problem, c, h);
  const auto homes = problem.market().homes();
  return improvers(problem.pref(c), problem.eval(c), h, homes);
}

HomeClasses classify_homes(const Problem& problem, ChildId c) {
  check_child(problem, c);
  const auto homes = problem.market().homes();
  return classify_homes(problem.pref(c), problem.eval(c), homes);
}

WeakRanking unanimous_ranking(const Problem& problem, ChildId c, std::span<const HomeId> domain) {
  check_child(problem, c);
  for (HomeId h : domain) {
    require(problem.market().feasible(c, h), ErrorCode::kInvalidArgument,
            "unanimous ranking domain contains an infeasible home");
  }
  auto classes = classify_homes(problem.pref(c), problem.eval(c), domain);
  return WeakRanking({std::move(classes.unanimous), std::move(classes.non_unanimous)});
}

WeakRanking unanimous_ranking(const Problem& problem, ChildId c) {
  check_child(problem, c);
  const auto domain = problem.market().feasible_homes(c);
  return unanimous_ranking(problem, c, domain);
}

std::vector<ChildId> unanimous_children(const Problem& problem, const Matching& m) {
  m.validate(problem.market());
  const UnanimityTable table(problem);
  std::vector<ChildId> out;
  for (ChildId c : problem.market().children()) {
    if (table.tier(c, m[c]) == 0) out.push_back(c);
  }
  return out;
}

std::vector<ChildId> matched_acceptably(const Problem& problem, const Matching& m) {
  m.validate(problem.market());
  const UnanimityTable table(problem);
  std::vector<ChildId> out;
  for (ChildId c : problem.market().children()) {
    if (table.tier(c, m[c]) <= 1) out.push_back(c);
  }
  return out;
}

bool is_acceptable(const Problem& problem, const Matching& m) {
  if (!m.feasible(problem.market())) return false;
  for (ChildId c : problem.market().children()) {
    const Slot h = m[c];
    if (h && !problem.unanimously_acceptable(c, *h)) return false;
  }
  return true;
}

bool pareto_dominates(const Problem& problem, const Matching& better, const Matching& worse,
                      PrefOrEval order) {
  better.validate(problem.market());
  worse.validate(problem.market());
  bool strict = false;
  for (ChildId c : problem.market().children()) {
    const Slot a = better[c];
    const Slot b = worse[c];
    if (a == b) continue;
    if (!problem.prefers(order, c, a, b)) return false;
    strict = true;
  }
  return strict;
}

bool unanimously_dominates(const Problem& problem, const Matching& better, const Matching& worse) {
  require(is_acceptable(problem, better) && is_acceptable(problem, worse),
          ErrorCode::kInvalidArgument, "unanimous dominance compares acceptable matchings only");
  const UnanimityTable table(problem);
  bool star_grows = false;
  bool kappa_grows = false;
  for (ChildId c : problem.market().children()) {
    const int tb = table.tier(c, better[c]);
    const int tw = table.tier(c, worse[c]);
    const bool star_b = tb == 0, star_w = tw == 0;
    const bool kappa_b = tb <= 1, kappa_w = tw <= 1;
    if (star_w && !star_b) return false;
    if (kappa_w && !kappa_b) return false;
    star_grows |= star_b && !star_w;
    kappa_grows |= kappa_b && !kappa_w;
  }
  return star_grows || kappa_grows;
}

bool is_tier_efficient(const Problem& problem, const Matching& m) {
  require(is_acceptable(problem, m), ErrorCode::kInvalidArgument,
          "unanimity is defined for acceptable matchings only");
  const UnanimityTable table(problem);
  const auto n = problem.child_count();
  const auto holders = m.holders(problem.home_count());
  const std::size_t sink = n;

  struct Edge {
    std::size_t to;
    bool strict;
  };
  std::vector<std::vector<Edge>> graph(n);
  for (ChildId c : problem.market().children()) {
    const int current = table.tier(c, m[c]);
    for (HomeId h : problem.market().feasible_homes(c)) {
      if (m[c] == Slot{h}) continue;
      const int t = table.tier(c, h);
      if (t > 1 || t > current) continue;
      const std::size_t to = holders[h.value] ? holders[h.value]->value : sink;
      graph[c.value].push_back({to, t < current});
    }
  }

  auto reaches = [&](std::size_t from, std::size_t target) {
    if (from == target) return true;
    std::vector<bool> seen(n + 1, false);
    std::deque<std::size_t> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      if (u == sink) continue;
      for (const auto& e : graph[u]) {
        if (e.to == target) return true;
        if (!seen[e.to]) {
          seen[e.to] = true;
          queue.push_back(e.to);
        }
      }
    }
    return false;
  };

  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& e : graph[u]) {
      if (!e.strict) continue;
      if (e.to == sink || reaches(e.to, sink) || reaches(e.to, u)) return false;
    }
  }
  return true;
}

UnanimityTable::UnanimityTable(const Problem& problem) : homes_(problem.home_count()) {
  const auto n = problem.child_count();
  classes_.assign(n * homes_, HomeClass::kUnacceptable);
  counts_.assign(n * (homes_ + 1), 0);
  const bool masks = homes_ <= 64;
  if (masks) masks_.assign(n * (homes_ + 1), 0);

  constexpr auto P = PrefOrEval::kPreference;
  constexpr auto E = PrefOrEval::kEvaluation;
  for (std::uint32_t ci = 0; ci < n; ++ci) {
    const ChildId c{ci};
    for (std::uint32_t hi = 0; hi <= homes_; ++hi) {
      const Slot h = hi == homes_ ? Slot{} : Slot{HomeId{hi}};
      std::uint32_t count = 0;
      std::uint64_t mask = 0;
      for (std::uint32_t oi = 0; oi < homes_; ++oi) {
        const HomeId other{oi};
        if (h && other == *h) continue;
        if (!problem.unanimously_acceptable(c, other)) continue;
        if (problem.rank(P, c, other) < problem.rank(P, c, h) &&
            problem.rank(E, c, other) < problem.rank(E, c, h)) {
          ++count;
          if (masks) mask |= std::uint64_t{1} << oi;
        }
      }
      counts_[ci * (homes_ + 1) + hi] = count;
      if (masks) masks_[ci * (homes_ + 1) + hi] = mask;
      if (h && problem.unanimously_acceptable(c, *h)) {
        classes_[ci * homes_ + hi] = count == 0 ? HomeClass::kUnanimous : HomeClass::kNonUnanimous;
      }
    }
  }
}

std::size_t UnanimityTable::improver_count(ChildId c, Slot h) const {
  return counts_[c.value * (homes_ + 1) + (h ? h->value : homes_)];
}

}  // namespace unanimity
