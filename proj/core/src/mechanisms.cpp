#include "unanimity/mechanisms.hpp"

#include <algorithm>

#include "bipartite.hpp"
#include "unanimity/errors.hpp"
#include "unanimity/unanimity.hpp"

namespace unanimity {

namespace {

using detail::Kuhn;

constexpr auto kPref = PrefOrEval::kPreference;
constexpr auto kEval = PrefOrEval::kEvaluation;

std::vector<std::uint32_t> raw(const std::vector<HomeId>& homes) {
  std::vector<std::uint32_t> out;
  out.reserve(homes.size());
  for (HomeId h : homes) out.push_back(h.value);
  return out;
}

// H* and H- of c with improvers restricted to `in_domain`.
std::vector<std::vector<HomeId>> tiers_within(const Problem& problem, ChildId c,
                                              const std::vector<bool>& in_domain) {
  std::vector<HomeId> star, minus;
  const auto k = problem.home_count();
  for (std::uint32_t hi = 0; hi < k; ++hi) {
    const HomeId h{hi};
    if (!in_domain[hi] || !problem.market().feasible(c, h) || !problem.unanimously_acceptable(c, h))
      continue;
    bool improved = false;
    for (std::uint32_t oi = 0; oi < k && !improved; ++oi) {
      const HomeId o{oi};
      if (oi == hi || !in_domain[oi] || !problem.market().feasible(c, o)) continue;
      improved = problem.unanimously_acceptable(c, o) && problem.prefers(kPref, c, o, h) &&
                 problem.prefers(kEval, c, o, h);
    }
    (improved ? minus : star).push_back(h);
  }
  return {std::move(star), std::move(minus)};
}

template <class TierFn>
Commitments commit(const Problem& problem, const DictatorOrder& order, bool adaptive, TierFn tiers_for) {
  validate_order(problem.market(), order);
  const auto n = problem.child_count();
  const auto k = problem.home_count();
  Commitments out;
  out.homes.assign(n, std::nullopt);
  if (adaptive) out.remaining.assign(n, {});

  Kuhn kuhn(k);
  std::vector<bool> remaining(k, true);
  for (ChildId c : order) {
    if (adaptive) {
      for (std::uint32_t h = 0; h < k; ++h) {
        if (remaining[h]) out.remaining[c.value].emplace_back(h);
      }
    }
    for (auto& tier : tiers_for(c, remaining)) {
      if (tier.empty()) continue;
      const auto left = kuhn.push_left(raw(tier));
      if (kuhn.augment(left)) {
        out.homes[c.value] = std::move(tier);
        break;
      }
      kuhn.pop_left();
    }
    if (adaptive) remaining = kuhn.freeable();
  }
  return out;
}

int tie_key(const Problem& problem, ChildId c, HomeId h, TieBreakPolicy tie) {
  switch (tie) {
    case TieBreakPolicy::kByEvaluation: return problem.rank(kEval, c, h);
    case TieBreakPolicy::kByPreference: return problem.rank(kPref, c, h);
    case TieBreakPolicy::kByHomeId: return static_cast<int>(h.value);
  }
  return 0;
}

bool satisfiable(std::size_t home_count, const std::vector<std::vector<std::uint32_t>>& sets) {
  Kuhn kuhn(home_count);
  for (const auto& s : sets) {
    if (!kuhn.augment(kuhn.push_left(s))) return false;
  }
  return true;
}

}  // namespace

void validate_order(const Market& market, const DictatorOrder& order) {
  require(order.size() == market.child_count(), ErrorCode::kInvalidArgument,
          "dictator order must list every child exactly once");
  std::vector<bool> seen(market.child_count(), false);
  for (ChildId c : order) {
    require(market.contains(c) && !seen[c.value], ErrorCode::kInvalidArgument,
            "dictator order must list every child exactly once");
    seen[c.value] = true;
  }
}

DictatorOrder identity_order(const Market& market) { return market.children(); }

Matching sd(const Problem& problem, const DictatorOrder& order, PrefOrEval ranking) {
  validate_order(problem.market(), order);
  Matching out(problem.child_count());
  std::vector<bool> taken(problem.home_count(), false);
  for (ChildId c : order) {
    for (HomeId h : problem.ranking(ranking, c)) {
      if (!taken[h.value]) {
        taken[h.value] = true;
        out.assign(c, h);
        break;
      }
    }
  }
  return out;
}

Commitments sdi_commitments(const Problem& problem, const DictatorOrder& order) {
  const std::vector<bool> all(problem.home_count(), true);
  return commit(problem, order, false,
                [&](ChildId c, const std::vector<bool>&) { return tiers_within(problem, c, all); });
}

Commitments asdi_commitments(const Problem& problem, const DictatorOrder& order) {
  return commit(problem, order, true, [&](ChildId c, const std::vector<bool>& remaining) {
    return tiers_within(problem, c, remaining);
  });
}

bool commitments_satisfiable(const Problem& problem, const Commitments& commitments) {
  std::vector<std::vector<std::uint32_t>> sets;
  for (const auto& s : commitments.homes) {
    if (s) sets.push_back(raw(*s));
  }
  return satisfiable(problem.home_count(), sets);
}

Matching realize(const Problem& problem, const DictatorOrder& order, const Commitments& commitments,
                 TieBreakPolicy tie) {
  validate_order(problem.market(), order);
  require(commitments.homes.size() == problem.child_count(), ErrorCode::kInvalidArgument,
          "commitments do not match the market");
  const auto k = problem.home_count();
  std::vector<std::vector<std::uint32_t>> sets(problem.child_count());
  for (ChildId c : order) {
    if (commitments.homes[c.value]) sets[c.value] = raw(*commitments.homes[c.value]);
  }
  auto current = [&] {
    std::vector<std::vector<std::uint32_t>> active;
    for (ChildId c : order) {
      if (commitments.homes[c.value]) active.push_back(sets[c.value]);
    }
    return active;
  };
  require(satisfiable(k, current()), ErrorCode::kPreconditionViolation,
          "commitments cannot be honoured simultaneously");

  Matching out(problem.child_count());
  for (ChildId c : order) {
    if (!commitments.homes[c.value]) continue;
    auto candidates = *commitments.homes[c.value];
    std::stable_sort(candidates.begin(), candidates.end(), [&](HomeId a, HomeId b) {
      const auto ka = tie_key(problem, c, a, tie), kb = tie_key(problem, c, b, tie);
      return ka != kb ? ka < kb : a < b;
    });
    const auto saved = sets[c.value];
    bool placed = false;
    for (HomeId h : candidates) {
      sets[c.value] = {h.value};
      if (satisfiable(k, current())) {
        out.assign(c, h);
        placed = true;
        break;
      }
    }
    if (!placed) {
      sets[c.value] = saved;
      fail(ErrorCode::kPreconditionViolation, "commitments cannot be realized");
    }
  }
  return out;
}

Matching sdi(const Problem& problem, const DictatorOrder& order, TieBreakPolicy tie) {
  return realize(problem, order, sdi_commitments(problem, order), tie);
}

Matching asdi(const Problem& problem, const DictatorOrder& order, TieBreakPolicy tie) {
  return realize(problem, order, asdi_commitments(problem, order), tie);
}

Matching uttc(const Problem& problem, const Matching& initial, UttcOptions options) {
  initial.validate(problem.market());
  if (options.check_initial) {
    require(is_acceptable(problem, initial) && is_tier_efficient(problem, initial),
            ErrorCode::kPreconditionViolation, "initial matching is not unanimous");
  }
  const auto n = problem.child_count();
  const auto k = problem.home_count();
  const UnanimityTable table(problem);

  Matching current = initial;
  std::vector<bool> active(n, true);
  std::vector<bool> home_gone(k, false);
  std::vector<std::int32_t> holder(k, -1);
  for (std::uint32_t c = 0; c < n; ++c) {
    if (auto h = initial[ChildId{c}]) holder[h->value] = static_cast<std::int32_t>(c);
  }
  std::size_t left = n;

  auto remove = [&](std::uint32_t c) {
    active[c] = false;
    --left;
    if (auto h = current[ChildId{c}]) home_gone[h->value] = true;
  };

  std::vector<std::int32_t> target(n, -1);
  while (left > 0) {
    // each active child names her best permitted remaining home
    for (std::uint32_t ci = 0; ci < n; ++ci) {
      if (!active[ci]) continue;
      const ChildId c{ci};
      const bool restricted = table.tier(c, initial[c]) == 0;
      std::int32_t best = -1;
      for (HomeId h : problem.ranking(options.pointing, c)) {
        if (home_gone[h.value] || !problem.unanimously_acceptable(c, h)) continue;
        if (restricted && table.at(c, h) != HomeClass::kUnanimous) continue;
        best = static_cast<std::int32_t>(h.value);
        break;
      }
      target[ci] = best;
    }

    bool progressed = false;
    for (std::uint32_t ci = 0; ci < n; ++ci) {
      if (active[ci] && target[ci] < 0) {
        // only an unmatched child can run out of permitted homes
        if (auto old = current[ChildId{ci}]) holder[old->value] = -1;
        current.assign(ChildId{ci}, std::nullopt);
        remove(ci);
        progressed = true;
      }
    }
    if (progressed) continue;

    // cycles in the child -> holder graph
    std::vector<std::uint8_t> state(n, 0);  // 0 new, 1 on path, 2 done
    std::vector<std::vector<std::uint32_t>> cycles;
    for (std::uint32_t start = 0; start < n; ++start) {
      if (!active[start] || state[start]) continue;
      std::vector<std::uint32_t> path;
      std::int32_t v = static_cast<std::int32_t>(start);
      while (v >= 0 && active[v] && state[v] == 0) {
        state[v] = 1;
        path.push_back(static_cast<std::uint32_t>(v));
        v = holder[target[v]];
      }
      if (v >= 0 && active[v] && state[v] == 1) {
        auto it = std::find(path.begin(), path.end(), static_cast<std::uint32_t>(v));
        cycles.emplace_back(it, path.end());
      }
      for (auto p : path) state[p] = 2;
    }

    if (!cycles.empty()) {
      for (const auto& cycle : cycles) {
        for (auto c : cycle) {
          const auto h = static_cast<std::uint32_t>(target[c]);
          current.assign(ChildId{c}, HomeId{h});
          holder[h] = static_cast<std::int32_t>(c);
        }
        for (auto c : cycle) remove(c);
      }
      continue;
    }

    // no cycle: chain tails take the free homes they point at
    std::vector<bool> claimed(k, false);
    for (std::uint32_t ci = 0; ci < n; ++ci) {
      if (!active[ci]) continue;
      const auto h = static_cast<std::uint32_t>(target[ci]);
      if (holder[h] >= 0 || claimed[h]) continue;
      claimed[h] = true;
      if (auto old = current[ChildId{ci}]) holder[old->value] = -1;
      current.assign(ChildId{ci}, HomeId{h});
      holder[h] = static_cast<std::int32_t>(ci);
      remove(ci);
    }
  }
  return current;
}

Slot rsa_choice(const StrictRanking& report, const AvailabilityFn& avail) {
  for (HomeId h : report) {
    if (h.value < avail.size() && avail[h.value]) return h;
  }
  return std::nullopt;
}

Matching rsa(const Problem& problem, const AvailabilityFn& avail) {
  require(avail.size() == problem.home_count(), ErrorCode::kInvalidArgument,
          "availability must be defined for every home");
  Matching out(problem.child_count());
  for (ChildId c : problem.market().children()) out.assign(c, rsa_choice(problem.pref(c), avail));
  return out;
}

}  // namespace unanimity
