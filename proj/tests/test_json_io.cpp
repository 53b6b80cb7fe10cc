#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "unanimity/errors.hpp"
#include "unanimity/json_io.hpp"

namespace unanimity {
namespace {

using namespace testing;
using json_io::json;

const char* kProblem = R"({
  "children": ["a", "b"],
  "homes": ["1", "2", 3],
  "prefs": {"a": ["1", "2"], "b": ["3"]},
  "evals": {"a": ["2", "1", "3"], "b": [3, "1"]}
})";

TEST(JsonProblemTest, ParsesLabels) {
  const auto p = json_io::problem_from_json(json_io::parse(kProblem));
  EXPECT_EQ(p.child_count(), 2u);
  EXPECT_EQ(p.home_count(), 3u);
  EXPECT_EQ(p.market().home_label(HomeId{2}), "3");
  EXPECT_EQ(p.pref(ChildId{0}), r({1, 2}));
  EXPECT_EQ(p.eval(ChildId{1}), r({3, 1}));
  EXPECT_TRUE(p.market().complete());
}

TEST(JsonProblemTest, RoundTrip) {
  const auto p = json_io::problem_from_json(json_io::parse(kProblem));
  EXPECT_EQ(json_io::problem_from_json(json_io::to_json(p)), p);
}

TEST(JsonProblemTest, EdgesRestrictMarket) {
  auto j = json_io::parse(kProblem);
  j["edges"] = json::array({{"a", "1"}, {"a", "2"}, {"b", "3"}, {"b", "1"}});
  j["evals"]["a"] = {"2", "1"};
  const auto p = json_io::problem_from_json(j);
  EXPECT_FALSE(p.market().complete());
  EXPECT_FALSE(p.market().feasible(ChildId{0}, HomeId{2}));
  EXPECT_EQ(json_io::problem_from_json(json_io::to_json(p)), p);
}

TEST(JsonProblemTest, Rejections) {
  const auto expect_invalid = [](const std::string& text) {
    try {
      json_io::problem_from_json(json_io::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument) << text;
    }
  };
  expect_invalid("{");
  expect_invalid(R"({"children": ["a"], "homes": ["1"], "prefs": {"a": ["1"]}})");
  expect_invalid(R"({"children": ["a"], "homes": ["1"], "prefs": {"a": ["9"]}, "evals": {"a": []}})");
  expect_invalid(R"({"children": ["a"], "homes": ["1"], "prefs": {"a": ["1", "1"]}, "evals": {"a": []}})");
  expect_invalid(R"({"children": ["a", "a"], "homes": ["1"], "prefs": {"a": []}, "evals": {"a": []}})");
  expect_invalid(R"({"children": ["a"], "homes": ["1"], "prefs": {"a": [], "z": []}, "evals": {"a": []}})");
  expect_invalid(R"({"children": ["a"], "homes": ["1"], "prefs": {"a": []}, "evals": {"a": []}, "x": 1})");
  expect_invalid(R"({"children": ["a"], "homes": ["1"], "prefs": {"a": [true]}, "evals": {"a": []}})");
}

TEST(JsonMatchingTest, RoundTripWithUnmatched) {
  const auto p = nonexistence_market();
  const Matching mu = m({3, 0, 1, 4});
  const auto j = json_io::to_json(p.market(), mu);
  EXPECT_TRUE(j.at("b").is_null());
  EXPECT_EQ(j.at("a"), "3");
  EXPECT_EQ(json_io::matching_from_json(p.market(), j), mu);
  EXPECT_EQ(json_io::matching_from_json(p.market(), json_io::parse(R"({"c": "1"})")), m({0, 0, 1, 0}));
  EXPECT_THROW(json_io::matching_from_json(p.market(), json_io::parse(R"({"q": "1"})")), Error);
}

TEST(JsonOrderTest, MustBePermutation) {
  const auto market = labelled(3, 3);
  EXPECT_EQ(json_io::order_from_json(market, json::array({"c", "a", "b"})),
            (DictatorOrder{ChildId{2}, ChildId{0}, ChildId{1}}));
  EXPECT_THROW(json_io::order_from_json(market, json::array({"c", "a"})), Error);
  EXPECT_THROW(json_io::order_from_json(market, json::array({"c", "a", "a"})), Error);
}

TEST(JsonSimConfigTest, DefaultsAndOverrides) {
  const auto cfg = json_io::sim_config_from_json(json_io::parse(
      R"({"n_sims": 10, "mode": "assist", "alpha": 0.5, "children": [5, 6], "homes": 7,
          "mechanisms": ["sd", "uttc"], "tie": "evaluation", "seed": 3})"));
  EXPECT_EQ(cfg.n_sims, 10u);
  EXPECT_EQ(cfg.mode, sim::Mode::kAssist);
  EXPECT_EQ(cfg.children.hi, 6u);
  EXPECT_EQ(cfg.homes.lo, 7u);
  EXPECT_EQ(cfg.mechanisms.size(), 2u);
  EXPECT_EQ(cfg.tie, TieBreakPolicy::kByEvaluation);
  const auto back = json_io::sim_config_from_json(json_io::to_json(cfg));
  EXPECT_EQ(json_io::to_json(back), json_io::to_json(cfg));
  EXPECT_THROW(json_io::sim_config_from_json(json_io::parse(R"({"alpha": 2})")), Error);
  EXPECT_THROW(json_io::sim_config_from_json(json_io::parse(R"({"sims": 2})")), Error);
  EXPECT_THROW(json_io::sim_config_from_json(json_io::parse(R"({"n_sims": "x"})")), Error);
}

}  // namespace
}  // namespace unanimity
