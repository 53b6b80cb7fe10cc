#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "unanimity/elicit.hpp"
#include "unanimity/enumerate.hpp"
#include "unanimity/errors.hpp"
#include "unanimity/json_io.hpp"

namespace unanimity::elicit {
namespace {

constexpr std::int64_t kMinute = 60'000;

// Every home is available and only the first home ("h1") persists, so a
// ranking's payoff is fixed by its first entry.
ExperimentConfig fixed_config(std::size_t markets = 5) {
  auto cfg = synthetic_config(markets, 7);
  cfg.availability_prob = 1.0;
  for (auto& m : cfg.markets) {
    for (auto& row : m.persistence) row = {1, 0, 0, 0, 0};
  }
  return cfg;
}

void expect_code(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

json play(Service& s, const std::vector<json>& rankings, std::int64_t step = kMinute) {
  const auto id = s.create_session(json::object(), 0);
  std::int64_t t = 0;
  s.start(id, t);
  for (std::size_t k = 0; k < rankings.size(); ++k) {
    t += step;
    s.submit_ranking(id, k, rankings[k], t);
  }
  return s.finalize(id, t + 1);
}

TEST(ElicitPayoffTest, Totals) {
  const json good = json::array({"h1", "h2"}), bad = json::array({"h2"}), none = json::array();
  {
    Service s(fixed_config());
    EXPECT_EQ(play(s, {good, good, good, bad, none})["total"], "10.80");
  }
  {
    Service s(fixed_config());
    const auto r = play(s, {good, good, good, good, good});
    EXPECT_EQ(r["total"], "12.50");
    EXPECT_EQ(r["total_units"], 25);
    EXPECT_EQ(r["total_cents"], 1250);
  }
  {
    Service s(fixed_config());
    EXPECT_EQ(play(s, {none, none, none, none, none})["total"], "9.00");
  }
}

TEST(ElicitPayoffTest, RoundDetail) {
  Service s(fixed_config());
  const auto r = play(s, {json::array({"h2", "h1"}), json::array({"h1"}), json::array(), json::array({"h1"}),
                          json::array({"h1"})});
  ASSERT_EQ(r["rounds"].size(), 5u);
  EXPECT_EQ(r["rounds"][0]["match"], "h2");
  EXPECT_EQ(r["rounds"][0]["persisted"], false);
  EXPECT_EQ(r["rounds"][0]["units"], -5);
  EXPECT_EQ(r["rounds"][1]["units"], 5);
  EXPECT_TRUE(r["rounds"][2]["match"].is_null());
  EXPECT_EQ(r["rounds"][2]["units"], -2);
}

TEST(ElicitPayoffTest, TimeoutPaysUnmatched) {
  Service s(fixed_config());
  const auto id = s.create_session(json::object(), 0);
  s.start(id, 0);
  const auto out = s.submit_ranking(id, 0, json::array({"h1"}), 601'000);
  EXPECT_TRUE(out["timed_out"].get<bool>());
  const auto on_time = s.submit_ranking(id, 1, json::array({"h1"}), 601'000 + 600'000);
  EXPECT_FALSE(on_time["timed_out"].get<bool>());
  for (std::size_t k = 2; k < 5; ++k) s.submit_ranking(id, k, json::array({"h1"}), 1'300'000 + k);
  const auto r = s.finalize(id, 2'000'000);
  EXPECT_EQ(r["rounds"][0]["units"], -2);
  EXPECT_TRUE(r["rounds"][0]["match"].is_null());
  EXPECT_EQ(r["rounds"][1]["units"], 5);
  EXPECT_EQ(r["total_units"], 18);
}

// Ranking exactly the persisting homes is never beaten, whatever the draw.
TEST(ElicitPayoffTest, TruthIsOptimal) {
  const PayoffRule rule;
  const auto rankings = all_rankings(kMarketSize);
  ASSERT_EQ(rankings.size(), 326u);
  for (unsigned row_bits = 0; row_bits < 32; ++row_bits) {
    std::vector<std::uint8_t> row(kMarketSize);
    std::vector<HomeId> persisting;
    for (std::uint32_t h = 0; h < kMarketSize; ++h) {
      row[h] = (row_bits >> h) & 1u;
      if (row[h]) persisting.emplace_back(h);
    }
    const StrictRanking truth(persisting);
    for (unsigned avail_bits = 0; avail_bits < 32; ++avail_bits) {
      AvailabilityFn avail(kMarketSize);
      for (std::size_t h = 0; h < kMarketSize; ++h) avail[h] = (avail_bits >> h) & 1u;
      const int best = score_round(truth, avail, row, rule).units;
      for (const auto& r : rankings) {
        ASSERT_LE(score_round(r, avail, row, rule).units, best) << row_bits << " " << avail_bits;
      }
    }
  }
}

TEST(ElicitSessionTest, AssignmentsAreDistinct) {
  auto cfg = synthetic_config(5, 11);
  Service s(cfg);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (int i = 0; i < 5; ++i) {
    const auto id = s.create_session(json::object(), i);
    const auto session = *s.inspect(id);
    ASSERT_EQ(session.rounds.size(), 5u);
    std::set<std::size_t> markets;
    for (const auto& r : session.rounds) {
      markets.insert(r.market);
      EXPECT_TRUE(seen.insert({r.market, r.child}).second);
      EXPECT_EQ(r.availability.size(), kMarketSize);
    }
    EXPECT_EQ(markets.size(), 5u);
  }
  expect_code(ErrorCode::kUnavailable, [&] { s.create_session(json::object(), 9); });
}

TEST(ElicitSessionTest, ConfigValidation) {
  expect_code(ErrorCode::kInvalidArgument, [] { Service s(synthetic_config(4, 1)); });
  auto cfg = synthetic_config(5, 1);
  cfg.markets[1].id = cfg.markets[0].id;
  expect_code(ErrorCode::kInvalidArgument, [&] { cfg.validate(); });
  cfg = synthetic_config(5, 1);
  cfg.markets[2].persistence[0][0] = 2;
  expect_code(ErrorCode::kInvalidArgument, [&] { cfg.validate(); });
  cfg = synthetic_config(5, 1);
  cfg.availability_prob = 1.5;
  expect_code(ErrorCode::kInvalidArgument, [&] { cfg.validate(); });

  cfg = synthetic_config(6, 3);
  const auto back = config_from_json(json_io::parse(to_json(cfg).dump()));
  EXPECT_EQ(to_json(back), to_json(cfg));
}

TEST(ElicitSessionTest, AvailabilityFollowsProbability) {
  auto cfg = synthetic_config(200, 5);
  cfg.availability_prob = 0.3;
  Service s(cfg);
  std::size_t ones = 0, total = 0;
  for (int i = 0; i < 100; ++i) {
    const auto session = *s.inspect(s.create_session(json::object(), 0));
    for (const auto& r : session.rounds) {
      for (auto a : r.availability) {
        ones += a;
        ++total;
      }
    }
  }
  EXPECT_NEAR(static_cast<double>(ones) / total, 0.3, 0.03);
}

TEST(ElicitSessionTest, SubmissionErrors) {
  Service s(fixed_config());
  const auto id = s.create_session(json::object(), 0);
  expect_code(ErrorCode::kConflict, [&] { s.round_view(id); });
  expect_code(ErrorCode::kConflict, [&] { s.submit_ranking(id, 0, json::array({"h1"}), 1); });
  s.start(id, 0);
  expect_code(ErrorCode::kConflict, [&] { s.start(id, 1); });
  expect_code(ErrorCode::kConflict, [&] { s.submit_ranking(id, 1, json::array({"h1"}), 1); });
  expect_code(ErrorCode::kInvalidArgument, [&] { s.submit_ranking(id, 0, json::array({"h1", "h1"}), 1); });
  expect_code(ErrorCode::kInvalidArgument, [&] { s.submit_ranking(id, 0, json::array({"nowhere"}), 1); });
  expect_code(ErrorCode::kInvalidArgument, [&] { s.submit_ranking(id, 0, json{{"h1", 1}}, 1); });
  expect_code(ErrorCode::kInvalidArgument, [&] { s.submit_ranking(id, 0, json::array({1}), 1); });
  s.submit_ranking(id, 0, json::array({"h1"}), 2);
  expect_code(ErrorCode::kConflict, [&] { s.submit_ranking(id, 0, json::array({"h1"}), 3); });
  expect_code(ErrorCode::kConflict, [&] { s.finalize(id, 4); });
  expect_code(ErrorCode::kNotFound, [&] { s.start("missing", 0); });
}

TEST(ElicitSessionTest, FinalizeIsIdempotent) {
  std::stringstream log;
  Service s(fixed_config(), &log);
  const auto first = play(s, std::vector<json>(5, json::array({"h1"})));
  const auto lines = std::count(std::istreambuf_iterator<char>(log), {}, '\n');
  const auto id = first["session_id"].get<std::string>();
  EXPECT_EQ(s.finalize(id, 10 * kMinute), first);
  log.clear();
  log.seekg(0);
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(log), {}, '\n'), lines);
  EXPECT_TRUE(s.inspect(id)->finalized);
}

TEST(ElicitSessionTest, ReplayRestoresState) {
  const auto cfg = synthetic_config(8, 21);
  std::stringstream log;
  Service live(cfg, &log);
  const auto a = live.create_session(json{{"age", 30}}, 0);
  const auto b = live.create_session(json::object(), 1);
  live.start(a, 2);
  for (std::size_t k = 0; k < 5; ++k) live.submit_ranking(a, k, json::array({"h3", "h1"}), 3 + k);
  live.start(b, 10);
  live.submit_ranking(b, 0, json::array(), 11);
  const auto paid = live.finalize(a, 20);

  std::stringstream copy(log.str());
  auto restored = Service::replay(cfg, copy);
  EXPECT_EQ(restored->session_count(), 2u);
  EXPECT_EQ(restored->finalize(a, 99), paid);
  EXPECT_EQ(restored->status_view(b), live.status_view(b));
  EXPECT_EQ(restored->round_view(b), live.round_view(b));
  EXPECT_EQ(restored->export_preferences(true), live.export_preferences(true));
  EXPECT_EQ(restored->inspect(a)->survey, json({{"age", 30}}));
  // the next session continues the same sequence
  EXPECT_EQ(restored->create_session(json::object(), 30), live.create_session(json::object(), 30));

  std::stringstream garbage("{\"type\":\"created\"\n");
  expect_code(ErrorCode::kInvalidArgument, [&] { Service::replay(cfg, garbage); });
}

TEST(ElicitExportTest, Records) {
  auto cfg = fixed_config(6);
  Service s(cfg);
  play(s, {json::array({"h2"}), json::array({"h1"}), json::array(), json::array({"h1"}), json::array({"h5", "h4"})});
  const auto open = s.create_session(json::object(), 0);
  s.start(open, 0);
  s.submit_ranking(open, 0, json::array({"h1"}), 1);

  const auto done = s.export_preferences();
  ASSERT_EQ(done["records"].size(), 5u);
  for (const auto& rec : done["records"]) EXPECT_TRUE(rec["finished"].get<bool>());
  const auto all = s.export_preferences(true);
  EXPECT_EQ(all["records"].size(), 6u);

  std::size_t children = 0;
  for (const auto& m : done["markets"]) {
    const auto p = json_io::problem_from_json(m["problem"]);
    children += p.child_count();
    for (const auto c : p.market().children()) EXPECT_EQ(p.eval(c)[0], HomeId{0});
  }
  EXPECT_EQ(children, 5u);
}

void collect_keys(const json& j, std::set<std::string>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      out.insert(k);
      collect_keys(v, out);
    }
  } else if (j.is_array()) {
    for (const auto& v : j) collect_keys(v, out);
  }
}

struct Harness {
  Service service{fixed_config(6)};
  std::int64_t now = 0;
  Router router{service, "s3cret", [this] { return now; }};

  Response call(const std::string& method, const std::string& path, const json& body = nullptr,
                std::map<std::string, std::string> headers = {}, std::map<std::string, std::string> query = {}) {
    return router.handle({method, path, body.is_null() ? "" : body.dump(), std::move(headers), std::move(query)});
  }
};

TEST(ElicitRouterTest, FullSessionHidesOutcomes) {
  Harness h;
  std::vector<Response> seen;
  auto created = h.call("POST", "/sessions", {{"survey", {{"role", "caseworker"}}}});
  ASSERT_EQ(created.status, 201);
  const auto id = created.body["session_id"].get<std::string>();
  seen.push_back(created);
  seen.push_back(h.call("GET", "/sessions/" + id));
  seen.push_back(h.call("POST", "/sessions/" + id + "/start"));
  EXPECT_EQ(seen.back().status, 200);
  for (int k = 0; k < 5; ++k) {
    h.now += kMinute;
    auto view = h.call("GET", "/sessions/" + id + "/round");
    ASSERT_EQ(view.status, 200);
    EXPECT_EQ(view.body["round"], k);
    EXPECT_EQ(view.body["homes"].size(), 5u);
    seen.push_back(view);
    auto sub = h.call("POST", "/sessions/" + id + "/round/" + std::to_string(k) + "/ranking",
                      {{"ranking", {"h1", "h2"}}});
    ASSERT_EQ(sub.status, 200) << sub.body.dump();
    seen.push_back(sub);
  }
  seen.push_back(h.call("GET", "/sessions/" + id));
  EXPECT_EQ(seen.back().body["status"], "finished");

  const std::set<std::string> forbidden{"availability", "match", "persisted", "persistence",
                                        "units",        "payoff", "total"};
  for (const auto& r : seen) {
    std::set<std::string> keys;
    collect_keys(r.body, keys);
    for (const auto& k : forbidden) EXPECT_EQ(keys.count(k), 0u) << k << " in " << r.body.dump();
  }
  const auto paid = h.call("POST", "/sessions/" + id + "/finalize");
  ASSERT_EQ(paid.status, 200);
  EXPECT_EQ(paid.body["total"], "12.50");
}

TEST(ElicitRouterTest, Errors) {
  Harness h;
  const auto id = h.call("POST", "/sessions").body["session_id"].get<std::string>();
  EXPECT_EQ(h.call("GET", "/nothing").status, 404);
  EXPECT_EQ(h.call("GET", "/sessions/unknown").status, 404);
  EXPECT_EQ(h.call("DELETE", "/sessions/" + id).status, 405);
  EXPECT_EQ(h.call("GET", "/sessions").status, 405);
  EXPECT_EQ(h.call("GET", "/sessions/" + id + "/round").status, 409);
  EXPECT_EQ(h.call("POST", "/sessions/" + id + "/finalize").status, 409);
  h.call("POST", "/sessions/" + id + "/start");
  const auto path = "/sessions/" + id + "/round/";
  EXPECT_EQ(h.call("POST", path + "1/ranking", {{"ranking", json::array()}}).status, 409);
  EXPECT_EQ(h.call("POST", path + "x/ranking", {{"ranking", json::array()}}).status, 400);
  EXPECT_EQ(h.call("POST", path + "0/ranking", {{"order", json::array()}}).status, 400);
  auto broken = h.router.handle({"POST", path + "0/ranking", "{not json", {}, {}});
  EXPECT_EQ(broken.status, 400);
  EXPECT_EQ(broken.body["error"], to_string(ErrorCode::kInvalidArgument));
  EXPECT_EQ(h.call("POST", path + "0/ranking", {{"ranking", {"h1"}}}).status, 200);
  EXPECT_EQ(h.call("POST", path + "0/ranking", {{"ranking", {"h1"}}}).status, 409);
}

TEST(ElicitRouterTest, AdminExport) {
  Harness h;
  EXPECT_EQ(h.call("GET", "/admin/export").status, 403);
  EXPECT_EQ(h.call("GET", "/admin/export", nullptr, {{"x-admin-token", "wrong"}}).status, 403);
  EXPECT_EQ(h.call("POST", "/admin/export", nullptr, {{"x-admin-token", "s3cret"}}).status, 405);
  play(h.service, std::vector<json>(5, json::array({"h1"})));
  const auto r = h.call("GET", "/admin/export", nullptr, {{"authorization", "Bearer s3cret"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["records"].size(), 5u);

  Service s(fixed_config());
  Router closed(s, "", [] { return 0; });
  EXPECT_EQ(closed.handle({"GET", "/admin/export", "", {{"x-admin-token", ""}}, {}}).status, 403);
}

}  // namespace
}  // namespace unanimity::elicit
