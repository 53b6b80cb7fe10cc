#include "unanimity/json_io.hpp"

#include <algorithm>

#include "unanimity/errors.hpp"
#include "unanimity/mechanisms.hpp"

namespace unanimity::json_io {
namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::kInvalidArgument, what); }

std::string label_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer() || j.is_number_unsigned()) return j.dump();
  bad("label must be a string or an integer, got " + j.dump());
}

std::vector<std::string> labels(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) bad(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& x : j.at(key)) out.push_back(label_of(x));
  return out;
}

HomeId home_of(const Market& market, const json& j) {
  const auto label = label_of(j);
  const auto h = market.find_home(label);
  if (!h) bad("unknown home '" + label + "'");
  return *h;
}

std::vector<StrictRanking> rankings(const Market& market, const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object()) bad(std::string("'") + key + "' must be an object");
  const auto& obj = j.at(key);
  for (const auto& [label, value] : obj.items()) {
    if (!market.find_child(label)) bad(std::string("'") + key + "' names unknown child '" + label + "'");
  }
  std::vector<StrictRanking> out;
  for (const auto c : market.children()) {
    const auto& label = market.child_label(c);
    if (!obj.contains(label)) bad(std::string("'") + key + "' has no entry for child '" + label + "'");
    out.push_back(ranking_from_json(market, obj.at(label)));
  }
  return out;
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* what) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      bad(std::string("unknown key '") + key + "' in " + what);
    }
  }
}

sim::SizeRange range_of(const json& j, const char* key) {
  const auto& r = j.at(key);
  if (r.is_number_unsigned() || r.is_number_integer()) {
    const auto n = r.get<std::int64_t>();
    if (n < 1) bad(std::string("'") + key + "' must be positive");
    return {static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
  if (!r.is_array() || r.size() != 2) bad(std::string("'") + key + "' must be [lo, hi] or a single count");
  const auto lo = r[0].get<std::int64_t>(), hi = r[1].get<std::int64_t>();
  if (lo < 1 || hi < lo) bad(std::string("'") + key + "' is not a valid range");
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

TieBreakPolicy tie_of(const std::string& s) {
  if (s == "evaluation") return TieBreakPolicy::kByEvaluation;
  if (s == "preference") return TieBreakPolicy::kByPreference;
  if (s == "home_id" || s == "random") return TieBreakPolicy::kByHomeId;
  bad("unknown tie policy '" + s + "'");
}

const char* tie_name(TieBreakPolicy tie) {
  switch (tie) {
    case TieBreakPolicy::kByEvaluation:
      return "evaluation";
    case TieBreakPolicy::kByPreference:
      return "preference";
    case TieBreakPolicy::kByHomeId:
      return "home_id";
  }
  return "home_id";
}

}  // namespace

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Problem problem_from_json(const json& j) {
  if (!j.is_object()) bad("problem must be a JSON object");
  reject_unknown_keys(j, {"children", "homes", "prefs", "evals", "edges"}, "problem");
  auto child_labels = labels(j, "children");
  auto home_labels = labels(j, "homes");
  Market market(child_labels.size(), home_labels.size());
  market.set_labels(child_labels, home_labels);
  if (j.contains("edges")) {
    if (!j.at("edges").is_array()) bad("'edges' must be an array of [child, home] pairs");
    std::vector<std::pair<ChildId, HomeId>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) bad("each edge must be a [child, home] pair");
      edges.emplace_back(child_from_json(market, e[0]), home_of(market, e[1]));
    }
    Market restricted(child_labels.size(), home_labels.size(), edges);
    restricted.set_labels(std::move(child_labels), std::move(home_labels));
    market = std::move(restricted);
  }
  auto prefs = rankings(market, j, "prefs");
  auto evals = rankings(market, j, "evals");
  return Problem(std::move(market), std::move(prefs), std::move(evals));
}

json to_json(const Problem& p) {
  const Market& market = p.market();
  json j;
  auto& children = j["children"] = json::array();
  auto& homes = j["homes"] = json::array();
  for (const auto c : market.children()) children.push_back(market.child_label(c));
  for (const auto h : market.homes()) homes.push_back(market.home_label(h));
  auto& prefs = j["prefs"] = json::object();
  auto& evals = j["evals"] = json::object();
  for (const auto c : market.children()) {
    prefs[market.child_label(c)] = to_json(market, p.pref(c));
    evals[market.child_label(c)] = to_json(market, p.eval(c));
  }
  if (!market.complete()) {
    auto& edges = j["edges"] = json::array();
    for (const auto& [c, h] : market.edges()) edges.push_back({market.child_label(c), market.home_label(h)});
  }
  return j;
}

ChildId child_from_json(const Market& market, const json& j) {
  const auto label = label_of(j);
  const auto c = market.find_child(label);
  if (!c) bad("unknown child '" + label + "'");
  return *c;
}

Matching matching_from_json(const Market& market, const json& j) {
  if (!j.is_object()) bad("matching must be a JSON object");
  Matching m(market.child_count());
  for (const auto& [label, value] : j.items()) {
    const auto c = market.find_child(label);
    if (!c) bad("matching names unknown child '" + label + "'");
    if (!value.is_null()) m.assign(*c, home_of(market, value));
  }
  return m;
}

json to_json(const Market& market, const Matching& m) {
  json j = json::object();
  for (const auto c : market.children()) {
    const Slot h = m[c];
    j[market.child_label(c)] = h ? json(market.home_label(*h)) : json(nullptr);
  }
  return j;
}

StrictRanking ranking_from_json(const Market& market, const json& j) {
  if (!j.is_array()) bad("ranking must be an array of homes");
  std::vector<HomeId> order;
  for (const auto& x : j) order.push_back(home_of(market, x));
  return StrictRanking(std::move(order));
}

json to_json(const Market& market, const StrictRanking& r) {
  json j = json::array();
  for (const auto h : r) j.push_back(market.home_label(h));
  return j;
}

std::vector<ChildId> order_from_json(const Market& market, const json& j) {
  if (!j.is_array()) bad("order must be an array of children");
  std::vector<ChildId> order;
  for (const auto& x : j) order.push_back(child_from_json(market, x));
  validate_order(market, order);
  return order;
}

sim::SimConfig sim_config_from_json(const json& j) {
  if (!j.is_object()) bad("simulation config must be a JSON object");
  reject_unknown_keys(j,
                      {"n_sims", "children", "homes", "alpha", "mode", "noise", "seed", "mechanisms", "tie",
                       "race_shares", "common_quality_only"},
                      "simulation config");
  sim::SimConfig cfg;
  try {
    if (j.contains("n_sims")) cfg.n_sims = j.at("n_sims").get<std::uint64_t>();
    if (j.contains("children")) cfg.children = range_of(j, "children");
    if (j.contains("homes")) cfg.homes = range_of(j, "homes");
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("mode")) cfg.mode = sim::parse_mode(j.at("mode").get<std::string>());
    if (j.contains("noise")) cfg.noise = sim::parse_noise(j.at("noise").get<std::string>());
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tie")) cfg.tie = tie_of(j.at("tie").get<std::string>());
    if (j.contains("mechanisms")) {
      cfg.mechanisms.clear();
      for (const auto& m : j.at("mechanisms")) cfg.mechanisms.push_back(sim::parse_mechanism(m.get<std::string>()));
    }
    if (j.contains("race_shares")) cfg.race_shares = j.at("race_shares").get<std::vector<double>>();
    if (j.contains("common_quality_only")) cfg.common_quality_only = j.at("common_quality_only").get<bool>();
  } catch (const json::exception& e) {
    bad(std::string("bad simulation config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json to_json(const sim::SimConfig& cfg) {
  json mechs = json::array();
  for (const auto m : cfg.mechanisms) mechs.push_back(std::string(sim::to_string(m)));
  return {{"n_sims", cfg.n_sims},
          {"children", {cfg.children.lo, cfg.children.hi}},
          {"homes", {cfg.homes.lo, cfg.homes.hi}},
          {"alpha", cfg.alpha},
          {"mode", std::string(sim::to_string(cfg.mode))},
          {"noise", std::string(sim::to_string(cfg.noise))},
          {"seed", cfg.seed},
          {"tie", tie_name(cfg.tie)},
          {"mechanisms", std::move(mechs)},
          {"race_shares", cfg.race_shares},
          {"common_quality_only", cfg.common_quality_only}};
}

}  // namespace unanimity::json_io
