#include "unanimity/aggregation.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "unanimity/enumerate.hpp"
#include "unanimity/errors.hpp"
#include "unanimity/rng.hpp"
#include "unanimity/unanimity.hpp"

namespace unanimity {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

// 1-based rank, kInf when unlisted
std::size_t rank1(const StrictRanking& r, HomeId h) {
  auto p = r.position(h);
  return p ? *p + 1 : kInf;
}

template <class Score>
StrictRanking sort_by(const StrictRanking& pref, std::span<const HomeId> homes, Score score) {
  struct Entry {
    std::size_t score;
    std::size_t pref_pos;
    HomeId h;
  };
  std::vector<Entry> entries;
  for (HomeId h : homes) {
    const auto s = score(h);
    if (s == kInf) continue;
    entries.push_back({s, rank1(pref, h), h});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score < b.score;
    if (a.pref_pos != b.pref_pos) return a.pref_pos < b.pref_pos;
    return a.h < b.h;
  });
  std::vector<HomeId> order;
  for (const auto& e : entries) order.push_back(e.h);
  return StrictRanking(std::move(order));
}

bool better(const StrictRanking& r, HomeId a, HomeId b) { return r.prefers(a, b); }

}  // namespace

StrictRanking borda(const StrictRanking& pref, const StrictRanking& eval, std::span<const HomeId> homes) {
  // a home unacceptable on either side leaves the ranking, so the placeholder
  // rank for unlisted homes never enters a kept score
  return sort_by(pref, homes, [&](HomeId h) -> std::size_t {
    const auto p = rank1(pref, h), e = rank1(eval, h);
    if (p == kInf || e == kInf) return kInf;
    return p + e;
  });
}

StrictRanking min_rank(const StrictRanking& pref, const StrictRanking& eval, std::span<const HomeId> homes) {
  return sort_by(pref, homes, [&](HomeId h) { return std::min(rank1(pref, h), rank1(eval, h)); });
}

StrictRanking max_rank(const StrictRanking& pref, const StrictRanking& eval, std::span<const HomeId> homes) {
  return sort_by(pref, homes, [&](HomeId h) { return std::max(rank1(pref, h), rank1(eval, h)); });
}

StrictRanking extended_unanimity(const StrictRanking& pref, const StrictRanking& eval,
                                 std::span<const HomeId> homes) {
  const auto classes = classify_homes(pref, eval, homes);
  std::vector<HomeId> order;
  for (const auto* tier : {&classes.unanimous, &classes.non_unanimous}) {
    std::vector<HomeId> t = *tier;
    std::sort(t.begin(), t.end(), [&](HomeId a, HomeId b) { return better(pref, a, b); });
    order.insert(order.end(), t.begin(), t.end());
  }
  return StrictRanking(std::move(order));
}

StrictRanking serial_choice(const DictatorSequence& seq, const StrictRanking& pref,
                            const StrictRanking& eval, std::span<const HomeId> homes) {
  require(!seq.empty(), ErrorCode::kInvalidArgument, "dictator sequence must be nonempty");
  auto in_domain = [&](HomeId h) { return std::find(homes.begin(), homes.end(), h) != homes.end(); };
  std::vector<HomeId> chosen;
  auto next_pick = [&](const StrictRanking& r) -> std::optional<HomeId> {
    for (HomeId h : r) {
      if (in_domain(h) && std::find(chosen.begin(), chosen.end(), h) == chosen.end()) return h;
    }
    return std::nullopt;
  };
  std::size_t idle = 0;
  for (std::size_t i = 0; idle < seq.size(); i = (i + 1) % seq.size()) {
    const auto pick = next_pick(seq[i] == Dictator::kChild ? pref : eval);
    if (!pick) {
      ++idle;
      continue;
    }
    idle = 0;
    chosen.push_back(*pick);
  }
  return StrictRanking(std::move(chosen));
}

AggregationRule borda_rule() { return {"borda", borda}; }
AggregationRule min_rank_rule() { return {"min", min_rank}; }
AggregationRule max_rank_rule() { return {"max", max_rank}; }
AggregationRule extended_unanimity_rule() { return {"tau-u", extended_unanimity}; }

AggregationRule serial_choice_rule(DictatorSequence seq) {
  require(!seq.empty(), ErrorCode::kInvalidArgument, "dictator sequence must be nonempty");
  std::string name = "scr:";
  for (auto d : seq) name += d == Dictator::kChild ? 'C' : 'M';
  return {name, [seq = std::move(seq)](const StrictRanking& p, const StrictRanking& e,
                                       std::span<const HomeId> homes) {
            return serial_choice(seq, p, e, homes);
          }};
}

AggregationRule rule_by_name(const std::string& name) {
  if (name == "borda") return borda_rule();
  if (name == "min") return min_rank_rule();
  if (name == "max") return max_rank_rule();
  if (name == "tau-u") return extended_unanimity_rule();
  fail(ErrorCode::kInvalidArgument, "unknown aggregation rule: " + name);
}

DictatorSequence parse_sequence(const std::string& text) {
  DictatorSequence out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::string t;
    for (char ch : token) t += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (t == "c" || t == "child") {
      out.push_back(Dictator::kChild);
    } else if (t == "m" || t == "matchmaker") {
      out.push_back(Dictator::kMatchmaker);
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown dictator in sequence: " + token);
    }
    token.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  require(!out.empty(), ErrorCode::kInvalidArgument, "dictator sequence must be nonempty");
  return out;
}

Problem aggregate_problem(const Problem& problem, const AggregationRule& rule) {
  std::vector<StrictRanking> out;
  for (ChildId c : problem.market().children()) {
    const auto homes = problem.market().feasible_homes(c);
    out.push_back(rule(problem.pref(c), problem.eval(c), homes));
  }
  return Problem(problem.market(), out, out);
}

std::optional<WppCounterexample> wpp_violation(const StrictRanking& pref, const StrictRanking& eval,
                                               const StrictRanking& output, std::span<const HomeId> homes) {
  for (HomeId h : homes) {
    const bool p = pref.contains(h), e = eval.contains(h), t = output.contains(h);
    if (!p && !e && t) return WppCounterexample{'b', pref, eval, output, h, std::nullopt};
    if (p && e && !t) return WppCounterexample{'c', pref, eval, output, h, std::nullopt};
  }
  for (HomeId h : homes) {
    for (HomeId g : homes) {
      if (h == g) continue;
      if (pref.prefers(h, g) && eval.prefers(h, g) && !output.prefers(h, g))
        return WppCounterexample{'a', pref, eval, output, h, g};
    }
  }
  return std::nullopt;
}

std::optional<WppCounterexample> satisfies_wpp(const AggregationRule& rule, std::size_t home_count,
                                               CheckMode mode, std::uint64_t samples, std::uint64_t seed) {
  std::vector<HomeId> homes;
  for (std::uint32_t h = 0; h < home_count; ++h) homes.emplace_back(h);
  if (mode == CheckMode::kExhaustive) {
    require(home_count <= 4, ErrorCode::kResourceLimit, "exhaustive WPP check is limited to four homes");
    const auto rankings = all_rankings(homes, true);
    for (const auto& p : rankings) {
      for (const auto& e : rankings) {
        if (auto v = wpp_violation(p, e, rule(p, e, homes), homes)) return v;
      }
    }
    return std::nullopt;
  }
  CounterRng rng(seed, 0x77707070);
  auto draw = [&] {
    std::vector<HomeId> order = homes;
    rng.shuffle(order.begin(), order.end());
    order.resize(rng.below(home_count + 1));
    return StrictRanking(std::move(order));
  };
  for (std::uint64_t i = 0; i < samples; ++i) {
    const auto p = draw();
    const auto e = draw();
    if (auto v = wpp_violation(p, e, rule(p, e, homes), homes)) return v;
  }
  return std::nullopt;
}

}  // namespace unanimity
