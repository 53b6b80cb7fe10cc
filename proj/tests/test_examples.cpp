#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "unanimity/mechanisms.hpp"
#include "unanimity/oracle.hpp"
#include "unanimity/unanimity.hpp"

namespace unanimity {
namespace {

using namespace testing;
using oracle::ManipulationKind;

TEST(NonexistenceMarket, UnanimousHomeSets) {
  const auto p = nonexistence_market();
  EXPECT_EQ(classify_homes(p, ChildId{0}).unanimous, (r({1, 3, 4}).order()));
  EXPECT_EQ(classify_homes(p, ChildId{1}).unanimous, (r({1, 2, 3}).order()));
  EXPECT_EQ(classify_homes(p, ChildId{2}).unanimous, (r({1}).order()));
  EXPECT_EQ(classify_homes(p, ChildId{3}).unanimous, (r({4}).order()));
}

TEST(NonexistenceMarket, SingleUnanimousMatching) {
  const auto p = nonexistence_market();
  const auto all = oracle::unanimous_matchings(p);
  ASSERT_EQ(all.size(), 1u);
  EXPECT_EQ(describe(p.market(), all.front()), "(3, 2, 1, 4)");
  EXPECT_FALSE(oracle::is_efficient(p, all.front()));
  EXPECT_TRUE(oracle::is_constrained_efficient(p, all.front()));
  EXPECT_TRUE(pareto_dominates(p, m({2, 3, 1, 4}), all.front(), PrefOrEval::kPreference));
}

TEST(NonexistenceMarket, EveryMechanismFindsIt) {
  const auto p = nonexistence_market();
  DictatorOrder order = identity_order(p.market());
  do {
    EXPECT_EQ(sdi(p, order), m({3, 2, 1, 4}));
    EXPECT_EQ(uttc(p, sdi(p, order)), m({3, 2, 1, 4}));
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(NonexistenceMarket, AdaptiveOrderDcabLeavesTwoAndThree) {
  const auto p = nonexistence_market();
  const DictatorOrder order{ChildId{3}, ChildId{2}, ChildId{0}, ChildId{1}};
  const auto set = oracle::asdi_outcome_set(p, order);
  ASSERT_FALSE(set.empty());
  for (const auto& mu : set) {
    EXPECT_TRUE(mu[ChildId{0}] == s(2) || mu[ChildId{0}] == s(3)) << describe(p.market(), mu);
    EXPECT_TRUE(mu[ChildId{1}] == s(2) || mu[ChildId{1}] == s(3)) << describe(p.market(), mu);
  }
  for (auto tie : {TieBreakPolicy::kByEvaluation, TieBreakPolicy::kByPreference, TieBreakPolicy::kByHomeId}) {
    const auto mu = asdi(p, order, tie);
    EXPECT_NE(std::find(set.begin(), set.end(), mu), set.end()) << describe(p.market(), mu);
    EXPECT_TRUE(oracle::is_unimprovable(p, mu));
  }
  EXPECT_TRUE(std::find(set.begin(), set.end(), m({2, 3, 1, 4})) != set.end());
  EXPECT_FALSE(oracle::is_unanimous(p, m({2, 3, 1, 4})));
}

TEST(InefficientMarket, AllFullMatchingsUnanimous) {
  const auto p = inefficient_market();
  const auto all = oracle::unanimous_matchings(p);
  EXPECT_EQ(all.size(), 6u);
  int efficient = 0;
  for (const auto& mu : all) {
    EXPECT_EQ(mu.matched_count(), 3u);
    if (oracle::is_efficient(p, mu)) {
      ++efficient;
      EXPECT_EQ(mu, m({1, 2, 3}));
    }
  }
  EXPECT_EQ(efficient, 1);
}

TEST(InefficientMarket, TradingCyclesReachTopChoices) {
  const auto p = inefficient_market();
  EXPECT_EQ(uttc(p, m({2, 1, 3}), {PrefOrEval::kPreference}), m({1, 2, 3}));
}

TEST(TruncationMarket, TwoUnanimousMatchings) {
  const auto p = truncation_market();
  EXPECT_EQ(oracle::unanimous_matchings(p), (std::vector<Matching>{m({1, 3}), m({3, 1})}));
  const DictatorOrder ab{ChildId{0}, ChildId{1}};
  EXPECT_EQ(sdi(p, ab, TieBreakPolicy::kByEvaluation), m({3, 1}));
  EXPECT_EQ(sdi(p, ab, TieBreakPolicy::kByPreference), m({1, 3}));
}

TEST(TruncationMarket, ReportingOnlyHomeTwoPaysAgainstEither) {
  const auto p = truncation_market();
  const DictatorOrder ab{ChildId{0}, ChildId{1}};
  // (1,3): b truncates to home 2
  const auto b_lies = p.with_pref(ChildId{1}, r({2}));
  EXPECT_EQ(oracle::unanimous_matchings(b_lies), (std::vector<Matching>{m({1, 2}), m({3, 2})}));
  EXPECT_EQ(sdi(b_lies, ab, TieBreakPolicy::kByPreference)[ChildId{1}], s(2));
  // (3,1): a truncates to home 2
  const auto a_lies = p.with_pref(ChildId{0}, r({2}));
  EXPECT_EQ(oracle::unanimous_matchings(a_lies), (std::vector<Matching>{m({2, 1}), m({2, 3})}));
  EXPECT_EQ(sdi(a_lies, ab, TieBreakPolicy::kByEvaluation)[ChildId{0}], s(2));
}

TEST(TruncationMarket, SearchFindsProfitableMisreports) {
  const auto p = truncation_market();
  const DictatorOrder ab{ChildId{0}, ChildId{1}};
  for (auto tie : {TieBreakPolicy::kByEvaluation, TieBreakPolicy::kByPreference}) {
    const oracle::Mechanism mech = [&](const Problem& q) { return sdi(q, ab, tie); };
    const auto v = oracle::find_sp_violation(mech, p);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(v->kind, ManipulationKind::kProfitable);
    EXPECT_TRUE(p.prefers(PrefOrEval::kPreference, v->child, v->manipulated_outcome[v->child],
                          v->truthful_outcome[v->child]));
  }
}

TEST(WorstCaseMarket, TruncatedReorderIsWorstCaseManipulation) {
  const auto market = labelled(2, 4);
  oracle::ObviousManipulationSearch search(oracle::sdi_family(2), market, ChildId{1});
  const auto pref = r({1, 2, 4, 3});
  const auto eval = r({3, 1, 2, 4});

  const auto& truthful = search.outcomes(pref, eval);
  EXPECT_TRUE(truthful.count(2));  // home 3
  const auto report = search.check(pref, eval, r({4, 2, 1}));
  ASSERT_TRUE(report.has_value());
  EXPECT_EQ(report->kind, ManipulationKind::kWorstCase);
  EXPECT_EQ(report->truthful_outcome[ChildId{1}], s(3));

  const auto all = search.find_all(pref, eval);
  EXPECT_TRUE(std::any_of(all.begin(), all.end(), [](const auto& x) { return x.misreport == r({4, 2, 1}); }));
}

}  // namespace
}  // namespace unanimity
