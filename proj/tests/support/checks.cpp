#include "support/checks.hpp"

#include <algorithm>
#include <bitset>
#include <set>
#include <sstream>

#include "unanimity/aggregation.hpp"
#include "unanimity/enumerate.hpp"
#include "unanimity/mechanisms.hpp"
#include "unanimity/oracle.hpp"
#include "unanimity/unanimity.hpp"

namespace unanimity::checks {

namespace {

constexpr TieBreakPolicy kTies[] = {TieBreakPolicy::kByEvaluation, TieBreakPolicy::kByPreference,
                                    TieBreakPolicy::kByHomeId};

std::string show(const Problem& p) {
  std::ostringstream out;
  out << p.child_count() << "x" << p.home_count();
  for (ChildId c : p.market().children()) {
    out << " " << p.market().child_label(c) << ":" << describe(p.market(), p.pref(c)) << "/"
        << describe(p.market(), p.eval(c));
  }
  return out.str();
}

std::string show(const Problem& p, const Matching& m) { return show(p) + " mu=" + describe(p.market(), m); }

StrictRanking random_ranking(CounterRng& rng, std::vector<HomeId> homes) {
  rng.shuffle(homes.begin(), homes.end());
  if (rng.bernoulli(0.5)) homes.resize(rng.below(homes.size() + 1));
  return StrictRanking(std::move(homes));
}

DictatorOrder random_order(CounterRng& rng, const Market& market) {
  auto order = identity_order(market);
  rng.shuffle(order.begin(), order.end());
  return order;
}

// smaller is better: list position, then the outside option, then unlisted homes
std::size_t key(const StrictRanking& r, Slot s) {
  if (!s) return r.size();
  auto p = r.position(*s);
  return p ? *p : r.size() + 1;
}

bool contains(const std::vector<Matching>& set, const Matching& m) {
  return std::find(set.begin(), set.end(), m) != set.end();
}

template <class Body>
CheckResult over_instances(std::string name, std::uint64_t instances, std::uint64_t seed, std::uint64_t stream,
                           std::size_t max_children, std::size_t max_homes, Body body) {
  CheckResult result{std::move(name)};
  for (std::uint64_t i = 0; i < instances; ++i) {
    CounterRng rng(seed, stream, i);
    const auto problem = random_problem(rng, max_children, max_homes);
    body(problem, rng, result);
    ++result.cases;
  }
  return result;
}

}  // namespace

Problem random_problem(CounterRng& rng, std::size_t max_children, std::size_t max_homes) {
  const auto n = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_children)));
  const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_homes)));
  Market market(n, k);
  if (rng.bernoulli(0.25)) {
    std::vector<std::pair<ChildId, HomeId>> edges;
    for (std::uint32_t c = 0; c < n; ++c) {
      for (std::uint32_t h = 0; h < k; ++h) {
        if (rng.bernoulli(0.7)) edges.emplace_back(ChildId{c}, HomeId{h});
      }
    }
    market = Market(n, k, edges);
  }
  std::vector<StrictRanking> prefs, evals;
  for (ChildId c : market.children()) {
    const auto homes = market.feasible_homes(c);
    prefs.push_back(random_ranking(rng, homes));
    evals.push_back(random_ranking(rng, homes));
  }
  return Problem(market, std::move(prefs), std::move(evals));
}

CheckResult reduction_equivalence(std::uint64_t instances, std::uint64_t seed) {
  return over_instances("unanimous-reduction equivalence", instances, seed, 1, 4, 4,
                        [](const Problem& p, CounterRng&, CheckResult& out) {
                          const auto unanimous = oracle::unanimous_matchings(p);
                          if (unanimous.empty()) out.violation("no unanimous matching: " + show(p));
                          const auto profile = oracle::unanimous_profile(p);
                          for (const auto& m : oracle::acceptable_matchings(p)) {
                            const bool a = contains(unanimous, m);
                            const bool b = is_tier_efficient(p, m);
                            const bool c = oracle::is_efficient_weak(p.market(), profile, m);
                            if (a != b || a != c) out.violation(show(p, m));
                          }
                        });
}

CheckResult dominance_partial_order(std::uint64_t instances, std::uint64_t seed) {
  return over_instances(
      "unanimous dominance is a strict partial order", instances, seed, 2, 4, 4,
      [](const Problem& p, CounterRng&, CheckResult& out) {
        const auto all = oracle::acceptable_matchings(p);
        const auto n = all.size();
        std::vector<std::bitset<256>> d(n);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) d[i][j] = unanimously_dominates(p, all[i], all[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
          if (d[i][i]) out.violation("reflexive at " + show(p, all[i]));
          for (std::size_t j = 0; j < n; ++j) {
            if (!d[i][j]) continue;
            if (d[j][i]) out.violation("symmetric pair " + show(p, all[i]));
            if ((d[j] & ~d[i]).any()) out.violation("not transitive through " + show(p, all[j]));
          }
        }
      });
}

CheckResult improver_structure(std::uint64_t instances, std::uint64_t seed) {
  return over_instances("home classes and improver sets", instances, seed, 3, 4, 5,
                        [](const Problem& p, CounterRng&, CheckResult& out) {
                          for (ChildId c : p.market().children()) {
                            const auto classes = classify_homes(p, c);
                            for (HomeId h : classes.unanimous) {
                              if (std::find(classes.non_unanimous.begin(), classes.non_unanimous.end(), h) !=
                                  classes.non_unanimous.end())
                                out.violation("overlapping classes " + show(p));
                              if (!improvers(p, c, h).empty() || !p.unanimously_acceptable(c, h))
                                out.violation("H* home with improver " + show(p));
                            }
                            for (HomeId h : p.market().feasible_homes(c)) {
                              for (HomeId g : improvers(p, c, h)) {
                                for (HomeId f : improvers(p, c, g)) {
                                  const auto outer = improvers(p, c, h);
                                  if (std::find(outer.begin(), outer.end(), f) == outer.end())
                                    out.violation("improvers not transitive " + show(p));
                                }
                              }
                            }
                          }
                        });
}

CheckResult pareto_agrees_with_pairwise(std::uint64_t instances, std::uint64_t seed) {
  return over_instances("pareto dominance matches pairwise comparison", instances, seed, 4, 3, 3,
                        [](const Problem& p, CounterRng&, CheckResult& out) {
                          const auto all = oracle::enumerate_matchings(p.market());
                          for (const auto& a : all) {
                            for (const auto& b : all) {
                              bool weak = true, strict = false;
                              for (ChildId c : p.market().children()) {
                                // strict preferences: a different home is weakly better only if strictly so
                                const auto ka = key(p.pref(c), a[c]), kb = key(p.pref(c), b[c]);
                                weak = weak && (a[c] == b[c] || ka < kb);
                                strict = strict || ka < kb;
                              }
                              if ((weak && strict) != pareto_dominates(p, a, b, PrefOrEval::kPreference))
                                out.violation(show(p, a) + " vs " + describe(p.market(), b));
                            }
                          }
                        });
}

CheckResult sdi_unanimous(std::uint64_t instances, std::uint64_t seed, std::size_t max_size) {
  const bool literal = max_size <= 4;
  return over_instances("SDI is unanimous", instances, seed, 5 + max_size, max_size, max_size,
                        [literal](const Problem& p, CounterRng& rng, CheckResult& out) {
                          const auto order = random_order(rng, p.market());
                          const auto set = literal ? oracle::sdi_outcome_set(p, order) : std::vector<Matching>{};
                          for (auto tie : kTies) {
                            const auto m = sdi(p, order, tie);
                            if (!oracle::is_unanimous(p, m)) out.violation("not unanimous " + show(p, m));
                            if (literal && !contains(set, m)) out.violation("outside set-based SDI " + show(p, m));
                          }
                        });
}

CheckResult uttc_unanimous_constrained(std::uint64_t instances, std::uint64_t seed, std::size_t max_size) {
  return over_instances(
      "UTTC is unanimous and constrained-efficient", instances, seed, 15 + max_size, max_size, max_size,
      [](const Problem& p, CounterRng& rng, CheckResult& out) {
        const auto order = random_order(rng, p.market());
        const auto initial = sdi(p, order, kTies[rng.below(3)]);
        for (auto pointing : {PrefOrEval::kPreference, PrefOrEval::kEvaluation}) {
          const auto m = uttc(p, initial, {pointing});
          if (!oracle::is_unanimous(p, m)) out.violation("not unanimous " + show(p, m));
          if (!oracle::is_constrained_efficient(p, m, pointing))
            out.violation("not constrained-efficient " + show(p, m));
          for (ChildId c : p.market().children()) {
            if (initial[c] && !m[c]) out.violation("unmatched a matched child " + show(p, m));
            if (p.prefers(pointing, c, initial[c], m[c])) out.violation("moved a child down " + show(p, m));
          }
        }
      });
}

CheckResult asdi_unimprovable(std::uint64_t instances, std::uint64_t seed, std::size_t max_size) {
  const bool literal = max_size <= 4;
  return over_instances("ASDI is unimprovable", instances, seed, 25 + max_size, max_size, max_size,
                        [literal](const Problem& p, CounterRng& rng, CheckResult& out) {
                          const auto order = random_order(rng, p.market());
                          const auto set = literal ? oracle::asdi_outcome_set(p, order) : std::vector<Matching>{};
                          for (auto tie : kTies) {
                            const auto m = asdi(p, order, tie);
                            if (!oracle::is_unimprovable(p, m)) out.violation("improvable " + show(p, m));
                            if (literal && !contains(set, m)) out.violation("outside set-based ASDI " + show(p, m));
                          }
                        });
}

CheckResult rsa_truthful_unique(std::size_t max_homes) {
  CheckResult out{"RSA truth-telling uniquely weakly dominant"};
  for (std::size_t k = 1; k <= max_homes; ++k) {
    const auto rankings = all_rankings(k);
    std::vector<AvailabilityFn> draws;
    for (std::uint32_t bits = 0; bits < (1u << k); ++bits) {
      AvailabilityFn avail(k);
      for (std::size_t h = 0; h < k; ++h) avail[h] = (bits >> h) & 1u;
      draws.push_back(std::move(avail));
    }
    for (const auto& truth : rankings) {
      for (const auto& report : rankings) {
        ++out.cases;
        bool strictly_worse_somewhere = false;
        for (const auto& avail : draws) {
          const auto honest = key(truth, rsa_choice(truth, avail));
          const auto lie = key(truth, rsa_choice(report, avail));
          if (lie < honest) out.violation("profitable misreport " + describe(Market(1, k), report));
          strictly_worse_somewhere = strictly_worse_somewhere || lie > honest;
        }
        if (report != truth && !truth.empty() && !strictly_worse_somewhere)
          out.violation("second weakly dominant report " + describe(Market(1, k), report) + " for " +
                        describe(Market(1, k), truth));
      }
    }
  }
  return out;
}

CheckResult rsa_independent(std::uint64_t instances, std::uint64_t seed) {
  return over_instances("RSA match independent of other reports", instances, seed, 40, 5, 5,
                        [](const Problem& p, CounterRng& rng, CheckResult& out) {
                          AvailabilityFn avail(p.home_count());
                          for (auto& a : avail) a = rng.bernoulli(0.5);
                          const auto base = rsa(p, avail);
                          for (ChildId c : p.market().children()) {
                            auto prefs = p.prefs();
                            for (ChildId o : p.market().children()) {
                              if (o != c) prefs[o.value] = random_ranking(rng, p.market().feasible_homes(o));
                            }
                            const Problem q(p.market(), prefs, p.evals());
                            if (rsa(q, avail)[c] != base[c]) out.violation(show(p));
                          }
                        });
}

CheckResult sdi_not_obviously_manipulable(std::size_t children, std::size_t homes) {
  CheckResult out{"SDI not obviously manipulable"};
  const Market market(children, homes);
  const auto rankings = all_rankings(homes);
  const auto family = oracle::sdi_family(children);
  for (ChildId c : market.children()) {
    oracle::ObviousManipulationSearch search(family, market, c);
    for (const auto& pref : rankings) {
      for (const auto& eval : rankings) {
        ++out.cases;
        if (auto r = search.find_first(pref, eval)) {
          out.violation(std::string(oracle::to_string(r->kind)) + " for child " + market.child_label(c) +
                        " pref " + describe(market, pref) + " eval " + describe(market, eval) + " lie " +
                        describe(market, r->misreport));
        }
      }
    }
  }
  return out;
}

CheckResult wpp_named_rules(std::size_t max_homes) {
  CheckResult out{"named aggregation rules satisfy WPP"};
  for (const auto& rule : {borda_rule(), min_rank_rule(), max_rank_rule(), extended_unanimity_rule()}) {
    for (std::size_t k = 1; k <= max_homes; ++k) {
      out.cases += ranking_count(k) * ranking_count(k);
      if (auto v = satisfies_wpp(rule, k, CheckMode::kExhaustive)) {
        out.violation(rule.name + " clause " + v->clause + " at " + std::to_string(k) + " homes");
      }
    }
  }
  return out;
}

CheckResult extended_unanimity_structure(std::uint64_t instances, std::uint64_t seed) {
  const auto rule = extended_unanimity_rule();
  return over_instances(
      "extended unanimity is strict and keeps unanimous efficiency", instances, seed, 50, 4, 4,
      [&rule](const Problem& p, CounterRng&, CheckResult& out) {
        for (ChildId c : p.market().children()) {
          const auto homes = p.market().feasible_homes(c);
          const auto t = rule(p.pref(c), p.eval(c), homes);
          const auto classes = classify_homes(p, c);
          std::vector<HomeId> expected;
          for (const auto* tier : {&classes.unanimous, &classes.non_unanimous}) {
            auto sorted = *tier;
            std::sort(sorted.begin(), sorted.end(), [&](HomeId a, HomeId b) { return p.pref(c).prefers(a, b); });
            expected.insert(expected.end(), sorted.begin(), sorted.end());
          }
          if (t.order() != expected) out.violation("unexpected order " + show(p));
          std::set<HomeId> distinct(t.begin(), t.end());
          if (distinct.size() != t.size()) out.violation("repeated home " + show(p));
          if (wpp_violation(p.pref(c), p.eval(c), t, homes)) out.violation("WPP " + show(p));
        }
        const auto aggregated = aggregate_problem(p, rule);
        for (const auto& m : oracle::unanimous_matchings(p)) {
          if (oracle::is_constrained_efficient(p, m) && !oracle::is_efficient(aggregated, m))
            out.violation("not efficient under the aggregate " + show(p, m));
        }
      });
}

CheckResult sd_iia(std::uint64_t instances, std::uint64_t seed) {
  return over_instances("SD satisfies IIA", instances, seed, 60, 3, 4,
                        [](const Problem& p, CounterRng& rng, CheckResult& out) {
                          const auto order = random_order(rng, p.market());
                          const oracle::Mechanism mech = [&order](const Problem& q) { return sd(q, order); };
                          if (auto v = oracle::check_iia(mech, std::span<const Problem>(&p, 1)))
                            out.violation(v->clause + " " + show(p));
                        });
}

}  // namespace unanimity::checks
