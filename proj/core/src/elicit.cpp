#include "unanimity/elicit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "unanimity/json_io.hpp"
#include "unanimity/rng.hpp"
#include "unanimity/sim.hpp"

namespace unanimity::elicit {
namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::kInvalidArgument, what); }

std::int64_t cents_of(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number()) bad(std::string("'") + key + "' must be a number");
  return std::llround(v.get<double>() * 100.0);
}

std::string money(std::int64_t cents) {
  const bool neg = cents < 0;
  const auto a = neg ? -cents : cents;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", neg ? "-" : "", static_cast<long long>(a / 100),
                static_cast<long long>(a % 100));
  return buf;
}

std::string session_id(std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, index, 0xe1);
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

// Parses a subject's ranking against one market's home labels.
StrictRanking parse_ranking(const MarketSpec& market, const json& j) {
  if (!j.is_array()) bad("ranking must be an array of home labels");
  std::vector<HomeId> order;
  for (const auto& x : j) {
    if (!x.is_string()) bad("ranking entries must be home labels");
    const auto label = x.get<std::string>();
    const auto it = std::find(market.home_labels.begin(), market.home_labels.end(), label);
    if (it == market.home_labels.end()) bad("unknown home '" + label + "'");
    const HomeId h{static_cast<std::uint32_t>(it - market.home_labels.begin())};
    if (std::find(order.begin(), order.end(), h) != order.end()) bad("home '" + label + "' ranked twice");
    order.push_back(h);
  }
  return StrictRanking(std::move(order));
}

json ranking_labels(const MarketSpec& market, const StrictRanking& r) {
  json out = json::array();
  for (const auto h : r) out.push_back(market.home_labels[h.value]);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  require(rounds_per_subject >= 1, ErrorCode::kInvalidArgument, "rounds_per_subject must be positive");
  require(markets.size() >= rounds_per_subject, ErrorCode::kInvalidArgument,
          "need at least " + std::to_string(rounds_per_subject) + " markets, got " +
              std::to_string(markets.size()));
  require(availability_prob >= 0.0 && availability_prob <= 1.0, ErrorCode::kInvalidArgument,
          "availability_prob must lie in [0, 1]");
  require(round_time_limit_ms > 0, ErrorCode::kInvalidArgument, "round time limit must be positive");
  std::set<std::string> ids;
  for (const auto& m : markets) {
    require(ids.insert(m.id).second, ErrorCode::kInvalidArgument, "duplicate market id '" + m.id + "'");
    const auto sized = [](const auto& v) { return v.size() == kMarketSize; };
    require(sized(m.child_labels) && sized(m.home_labels) && sized(m.child_profiles) && sized(m.home_profiles) &&
                sized(m.persistence),
            ErrorCode::kInvalidArgument, "market '" + m.id + "' must have 5 children and 5 homes");
    for (const auto& row : m.persistence) {
      require(sized(row), ErrorCode::kInvalidArgument, "market '" + m.id + "' persistence must be 5 x 5");
      for (auto y : row) require(y <= 1, ErrorCode::kInvalidArgument, "persistence entries must be 0 or 1");
    }
    require(std::set(m.home_labels.begin(), m.home_labels.end()).size() == kMarketSize &&
                std::set(m.child_labels.begin(), m.child_labels.end()).size() == kMarketSize,
            ErrorCode::kInvalidArgument, "market '" + m.id + "' labels must be unique");
  }
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    for (const auto& mj : j.at("markets")) {
      MarketSpec m;
      m.id = mj.at("id").get<std::string>();
      for (const auto& c : mj.at("children")) {
        m.child_labels.push_back(c.at("label").get<std::string>());
        m.child_profiles.push_back(c.value("profile", std::string()));
      }
      for (const auto& h : mj.at("homes")) {
        m.home_labels.push_back(h.at("label").get<std::string>());
        m.home_profiles.push_back(h.value("profile", std::string()));
      }
      m.persistence = mj.at("persistence").get<std::vector<std::vector<std::uint8_t>>>();
      cfg.markets.push_back(std::move(m));
    }
    cfg.rounds_per_subject = j.value("rounds_per_subject", cfg.rounds_per_subject);
    cfg.availability_prob = j.value("availability_prob", cfg.availability_prob);
    if (j.contains("round_time_limit_s")) {
      cfg.round_time_limit_ms = std::llround(j.at("round_time_limit_s").get<double>() * 1000.0);
    }
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("payoff")) {
      const auto& p = j.at("payoff");
      cfg.payoff.persist = p.value("persist", cfg.payoff.persist);
      cfg.payoff.fail = p.value("fail", cfg.payoff.fail);
      cfg.payoff.unmatched = p.value("unmatched", cfg.payoff.unmatched);
      if (p.contains("unit_value")) cfg.payoff.unit_value_cents = cents_of(p, "unit_value");
      if (p.contains("base_fee")) cfg.payoff.base_fee_cents = cents_of(p, "base_fee");
    }
  } catch (const json::exception& e) {
    bad(std::string("bad experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json markets = json::array();
  for (const auto& m : cfg.markets) {
    json children = json::array(), homes = json::array();
    for (std::size_t i = 0; i < m.child_labels.size(); ++i) {
      children.push_back({{"label", m.child_labels[i]}, {"profile", m.child_profiles[i]}});
    }
    for (std::size_t i = 0; i < m.home_labels.size(); ++i) {
      homes.push_back({{"label", m.home_labels[i]}, {"profile", m.home_profiles[i]}});
    }
    markets.push_back({{"id", m.id}, {"children", children}, {"homes", homes}, {"persistence", m.persistence}});
  }
  return {{"markets", markets},
          {"rounds_per_subject", cfg.rounds_per_subject},
          {"availability_prob", cfg.availability_prob},
          {"round_time_limit_s", static_cast<double>(cfg.round_time_limit_ms) / 1000.0},
          {"seed", cfg.seed},
          {"payoff",
           {{"persist", cfg.payoff.persist},
            {"fail", cfg.payoff.fail},
            {"unmatched", cfg.payoff.unmatched},
            {"unit_value", static_cast<double>(cfg.payoff.unit_value_cents) / 100.0},
            {"base_fee", static_cast<double>(cfg.payoff.base_fee_cents) / 100.0}}}};
}

ExperimentConfig synthetic_config(std::size_t markets, std::uint64_t seed) {
  sim::SimConfig model;
  model.children = {kMarketSize, kMarketSize};
  model.homes = {kMarketSize, kMarketSize};
  model.seed = seed;
  ExperimentConfig cfg;
  cfg.seed = seed;
  for (std::size_t k = 0; k < markets; ++k) {
    const auto rep = sim::generate(model, k);
    MarketSpec m;
    m.id = "m" + std::to_string(k + 1);
    for (std::size_t i = 0; i < kMarketSize; ++i) {
      m.child_labels.push_back("c" + std::to_string(i + 1));
      m.home_labels.push_back("h" + std::to_string(i + 1));
      m.child_profiles.push_back("Child " + std::to_string(i + 1) + " of market " + std::to_string(k + 1) + ".");
      m.home_profiles.push_back("Foster home " + std::to_string(i + 1) + " of market " + std::to_string(k + 1) + ".");
    }
    m.persistence.assign(kMarketSize, std::vector<std::uint8_t>(kMarketSize, 0));
    for (std::size_t c = 0; c < kMarketSize; ++c) {
      for (std::size_t h = 0; h < kMarketSize; ++h) m.persistence[c][h] = rep.model.w[c * kMarketSize + h] >= 0.5;
    }
    cfg.markets.push_back(std::move(m));
  }
  return cfg;
}

RoundOutcome score_round(const StrictRanking& ranking, const AvailabilityFn& availability,
                         const std::vector<std::uint8_t>& persistence_row, const PayoffRule& payoff,
                         bool timed_out) {
  if (timed_out) return {std::nullopt, payoff.unmatched};
  const Slot h = rsa_choice(ranking, availability);
  if (!h) return {std::nullopt, payoff.unmatched};
  return {h, persistence_row.at(h->value) ? payoff.persist : payoff.fail};
}

const char* to_string(Status status) {
  switch (status) {
    case Status::kInstructions:
      return "instructions";
    case Status::kInRound:
      return "in_round";
    case Status::kFinished:
      return "finished";
  }
  return "unknown";
}

Service::Service(ExperimentConfig config, std::ostream* log) : config_(std::move(config)), log_(log) {
  config_.validate();
  taken_.assign(config_.markets.size(), std::vector<std::uint8_t>(kMarketSize, 0));
}

std::unique_ptr<Service> Service::replay(ExperimentConfig config, std::istream& events, std::ostream* log) {
  auto service = std::make_unique<Service>(std::move(config), nullptr);
  std::string line;
  std::size_t n = 0;
  while (std::getline(events, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      service->apply(json::parse(line));
    } catch (const json::exception& e) {
      bad("event log line " + std::to_string(n) + ": " + e.what());
    }
  }
  service->log_ = log;
  return service;
}

void Service::emit(const json& event) {
  if (!log_) return;
  *log_ << event.dump() << '\n';
  log_->flush();
  require(static_cast<bool>(*log_), ErrorCode::kUnavailable, "event log is not writable");
}

Session& Service::find(const std::string& id) {
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) fail(ErrorCode::kNotFound, "no session '" + id + "'");
  return it->second;
}

const Session& Service::find(const std::string& id) const {
  return const_cast<Service*>(this)->find(id);
}

void Service::apply(const json& e) {
  const auto type = e.at("type").get<std::string>();
  const auto at = e.at("at").get<std::int64_t>();
  if (type == "created") {
    Session s;
    s.id = e.at("session").get<std::string>();
    s.survey = e.at("survey");
    s.created_ms = at;
    for (const auto& r : e.at("rounds")) {
      RoundState round;
      round.market = r.at("market").get<std::size_t>();
      round.child = r.at("child").get<std::size_t>();
      round.availability = r.at("availability").get<AvailabilityFn>();
      require(round.market < config_.markets.size() && round.child < kMarketSize &&
                  round.availability.size() == kMarketSize,
              ErrorCode::kInvalidArgument, "event log does not match the configuration");
      taken_[round.market][round.child] = 1;
      s.rounds.push_back(std::move(round));
    }
    order_.push_back(s.id);
    sessions_.emplace(s.id, std::move(s));
    ++created_;
  } else if (type == "started") {
    Session& s = find(e.at("session").get<std::string>());
    s.status = Status::kInRound;
    s.current = 0;
    s.rounds.at(0).started_ms = at;
  } else if (type == "submitted") {
    Session& s = find(e.at("session").get<std::string>());
    const auto k = e.at("round").get<std::size_t>();
    require(s.status == Status::kInRound && k == s.current, ErrorCode::kInvalidArgument,
            "event log submits out of order");
    RoundState& round = s.rounds.at(k);
    round.ranking = parse_ranking(config_.markets[round.market], e.at("ranking"));
    round.submitted_ms = at;
    round.timed_out = at > *round.deadline_ms(config_.round_time_limit_ms);
    if (++s.current < s.rounds.size()) {
      s.rounds[s.current].started_ms = at;
    } else {
      s.status = Status::kFinished;
    }
  } else if (type == "finalized") {
    find(e.at("session").get<std::string>()).finalized = true;
  } else {
    bad("unknown event type '" + type + "'");
  }
}

json Service::new_session_event(const json& survey, std::int64_t at_ms) {
  std::vector<std::size_t> open;
  for (std::size_t m = 0; m < taken_.size(); ++m) {
    if (std::count(taken_[m].begin(), taken_[m].end(), 0) > 0) open.push_back(m);
  }
  require(open.size() >= config_.rounds_per_subject, ErrorCode::kUnavailable,
          "no capacity left: fewer than " + std::to_string(config_.rounds_per_subject) +
              " markets have an unassigned child");
  CounterRng rng(config_.seed, created_, 1);
  rng.shuffle(open.begin(), open.end());
  json rounds = json::array();
  for (std::size_t k = 0; k < config_.rounds_per_subject; ++k) {
    const auto m = open[k];
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < kMarketSize; ++c) {
      if (!taken_[m][c]) free.push_back(c);
    }
    const auto child = free[rng.below(free.size())];
    CounterRng draw(config_.seed, created_, 2 + k);
    AvailabilityFn avail(kMarketSize);
    for (auto& a : avail) a = draw.bernoulli(config_.availability_prob) ? 1 : 0;
    rounds.push_back({{"market", m}, {"child", child}, {"availability", avail}});
  }
  return {{"type", "created"},
          {"session", session_id(config_.seed, created_)},
          {"survey", survey.is_null() ? json::object() : survey},
          {"rounds", std::move(rounds)},
          {"at", at_ms}};
}

std::string Service::create_session(const json& survey, std::int64_t at_ms) {
  std::lock_guard lock(mu_);
  require(survey.is_null() || survey.is_object(), ErrorCode::kInvalidArgument, "survey must be an object");
  const json event = new_session_event(survey, at_ms);
  emit(event);
  apply(event);
  return event.at("session").get<std::string>();
}

void Service::start(const std::string& id, std::int64_t at_ms) {
  std::lock_guard lock(mu_);
  const Session& s = find(id);
  require(s.status == Status::kInstructions, ErrorCode::kConflict, "session has already started");
  const json event{{"type", "started"}, {"session", id}, {"at", at_ms}};
  emit(event);
  apply(event);
}

json Service::status_view(const std::string& id) const {
  std::lock_guard lock(mu_);
  const Session& s = find(id);
  json out{{"session_id", s.id},
           {"status", to_string(s.status)},
           {"rounds_total", s.rounds.size()},
           {"finalized", s.finalized}};
  out["current_round"] = s.status == Status::kInRound ? json(s.current) : json(nullptr);
  return out;
}

json Service::round_view(const std::string& id) const {
  std::lock_guard lock(mu_);
  const Session& s = find(id);
  require(s.status != Status::kInstructions, ErrorCode::kConflict, "session has not started");
  require(s.status != Status::kFinished, ErrorCode::kConflict, "all rounds are complete");
  const RoundState& round = s.rounds[s.current];
  const MarketSpec& m = config_.markets[round.market];
  json homes = json::array();
  for (std::size_t h = 0; h < kMarketSize; ++h) {
    homes.push_back({{"label", m.home_labels[h]}, {"profile", m.home_profiles[h]}});
  }
  return {{"session_id", s.id},
          {"round", s.current},
          {"rounds_total", s.rounds.size()},
          {"market", m.id},
          {"child", {{"label", m.child_labels[round.child]}, {"profile", m.child_profiles[round.child]}}},
          {"homes", std::move(homes)},
          {"started_ms", *round.started_ms},
          {"deadline_ms", *round.deadline_ms(config_.round_time_limit_ms)},
          {"time_limit_s", static_cast<double>(config_.round_time_limit_ms) / 1000.0}};
}

json Service::submit_ranking(const std::string& id, std::size_t k, const json& ranking, std::int64_t at_ms) {
  std::lock_guard lock(mu_);
  const Session& s = find(id);
  require(s.status != Status::kInstructions, ErrorCode::kConflict, "session has not started");
  require(k < s.current || s.status == Status::kInRound, ErrorCode::kConflict, "all rounds are complete");
  require(k >= s.current, ErrorCode::kConflict, "round " + std::to_string(k) + " was already submitted");
  require(k == s.current, ErrorCode::kConflict,
          "round " + std::to_string(k) + " is not the current round (" + std::to_string(s.current) + ")");
  const MarketSpec& m = config_.markets[s.rounds[k].market];
  const StrictRanking parsed = parse_ranking(m, ranking);
  const json event{
      {"type", "submitted"}, {"session", id}, {"round", k}, {"ranking", ranking_labels(m, parsed)}, {"at", at_ms}};
  emit(event);
  apply(event);
  const Session& after = find(id);
  json out{{"session_id", id},
           {"round", k},
           {"accepted", true},
           {"timed_out", after.rounds[k].timed_out},
           {"status", to_string(after.status)}};
  out["next_round"] = after.status == Status::kInRound ? json(after.current) : json(nullptr);
  return out;
}

json Service::results(const Session& s) const {
  json rounds = json::array();
  std::int64_t units = 0;
  for (std::size_t k = 0; k < s.rounds.size(); ++k) {
    const RoundState& r = s.rounds[k];
    const MarketSpec& m = config_.markets[r.market];
    const auto outcome = score_round(*r.ranking, r.availability, m.persistence[r.child], config_.payoff, r.timed_out);
    units += outcome.units;
    json row{{"round", k},
             {"market", m.id},
             {"child", m.child_labels[r.child]},
             {"ranking", ranking_labels(m, *r.ranking)},
             {"timed_out", r.timed_out},
             {"units", outcome.units}};
    row["match"] = outcome.match ? json(m.home_labels[outcome.match->value]) : json(nullptr);
    row["persisted"] = outcome.match ? json(m.persistence[r.child][outcome.match->value] != 0) : json(nullptr);
    rounds.push_back(std::move(row));
  }
  const std::int64_t total = config_.payoff.base_fee_cents + config_.payoff.unit_value_cents * units;
  return {{"session_id", s.id},
          {"rounds", std::move(rounds)},
          {"total_units", units},
          {"base_fee", money(config_.payoff.base_fee_cents)},
          {"unit_value", money(config_.payoff.unit_value_cents)},
          {"total_cents", total},
          {"total", money(total)}};
}

json Service::finalize(const std::string& id, std::int64_t at_ms) {
  std::lock_guard lock(mu_);
  const Session& s = find(id);
  require(s.status == Status::kFinished, ErrorCode::kConflict, "session has unfinished rounds");
  if (!s.finalized) {
    const json event{{"type", "finalized"}, {"session", id}, {"at", at_ms}};
    emit(event);
    apply(event);
  }
  return results(find(id));
}

json Service::export_preferences(bool include_unfinished) const {
  std::lock_guard lock(mu_);
  json records = json::array();
  // market -> (child -> ranking)
  std::map<std::size_t, std::map<std::size_t, StrictRanking>> profiles;
  for (const auto& id : order_) {
    const Session& s = sessions_.at(id);
    const bool finished = s.status == Status::kFinished;
    if (!finished && !include_unfinished) continue;
    for (std::size_t k = 0; k < s.rounds.size(); ++k) {
      const RoundState& r = s.rounds[k];
      if (!r.ranking) continue;
      const MarketSpec& m = config_.markets[r.market];
      records.push_back({{"session_id", s.id},
                         {"finished", finished},
                         {"round", k},
                         {"market", m.id},
                         {"child", m.child_labels[r.child]},
                         {"ranking", ranking_labels(m, *r.ranking)},
                         {"timed_out", r.timed_out}});
      if (!r.timed_out) profiles[r.market][r.child] = *r.ranking;
    }
  }
  json markets = json::array();
  for (const auto& [mi, rows] : profiles) {
    const MarketSpec& spec = config_.markets[mi];
    std::vector<std::string> child_labels;
    std::vector<StrictRanking> prefs, evals;
    for (const auto& [c, ranking] : rows) {
      child_labels.push_back(spec.child_labels[c]);
      prefs.push_back(ranking);
      // the evaluation ranks persisting homes first
      std::vector<HomeId> order;
      for (int want : {1, 0}) {
        for (std::uint32_t h = 0; h < kMarketSize; ++h) {
          if (spec.persistence[c][h] == want) order.emplace_back(h);
        }
      }
      evals.emplace_back(std::move(order));
    }
    Market market(child_labels.size(), kMarketSize);
    market.set_labels(std::move(child_labels), spec.home_labels);
    const Problem problem(std::move(market), std::move(prefs), std::move(evals));
    markets.push_back({{"market", spec.id}, {"problem", json_io::to_json(problem)}});
  }
  return {{"records", std::move(records)}, {"markets", std::move(markets)}};
}

std::optional<Session> Service::inspect(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) return std::nullopt;
  return it->second;
}

std::size_t Service::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return 400;
    case ErrorCode::kForbidden:
      return 403;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kResourceLimit:
      return 413;
    case ErrorCode::kUnavailable:
      return 503;
    case ErrorCode::kPreconditionViolation:
      return 422;
  }
  return 500;
}

Router::Router(Service& service, std::string admin_token, Clock clock)
    : service_(service), admin_token_(std::move(admin_token)), clock_(std::move(clock)) {}

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : path) {
    if (ch == '/') {
      if (!cur.empty()) parts.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) parts.push_back(std::move(cur));
  return parts;
}

json body_json(const std::string& body) {
  if (body.empty()) return json::object();
  return json_io::parse(body);
}

std::size_t round_index(const std::string& text) {
  require(!text.empty() && text.size() < 6 && std::all_of(text.begin(), text.end(), ::isdigit),
          ErrorCode::kInvalidArgument, "round must be a non-negative integer");
  return static_cast<std::size_t>(std::stoul(text));
}

std::string header(const Request& r, const std::string& name) {
  const auto it = r.headers.find(name);
  return it == r.headers.end() ? std::string() : it->second;
}

bool same_token(const std::string& a, const std::string& b) {
  if (a.size() != b.size()) return false;
  unsigned char diff = 0;
  for (std::size_t i = 0; i < a.size(); ++i) diff |= static_cast<unsigned char>(a[i] ^ b[i]);
  return diff == 0;
}

Response error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"error", code}, {"message", message}}};
}

}  // namespace

Response Router::handle(const Request& request) const {
  try {
    return dispatch(request);
  } catch (const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception& e) {
    return error_response(400, to_string(ErrorCode::kInvalidArgument), e.what());
  }
}

Response Router::dispatch(const Request& r) const {
  const auto parts = split_path(r.path);
  const auto& method = r.method;
  auto method_not_allowed = [] { return error_response(405, "method-not-allowed", "method not allowed"); };

  if (parts.size() == 2 && parts[0] == "admin" && parts[1] == "export") {
    if (method != "GET") return method_not_allowed();
    std::string token = header(r, "x-admin-token");
    const auto auth = header(r, "authorization");
    if (token.empty() && auth.rfind("Bearer ", 0) == 0) token = auth.substr(7);
    if (admin_token_.empty() || !same_token(token, admin_token_)) {
      fail(ErrorCode::kForbidden, "admin credential required");
    }
    const auto it = r.query.find("include_unfinished");
    const bool all = it != r.query.end() && (it->second == "1" || it->second == "true");
    return {200, service_.export_preferences(all)};
  }
  if (parts.empty() || parts[0] != "sessions") {
    return error_response(404, to_string(ErrorCode::kNotFound), "no route for " + r.path);
  }
  if (parts.size() == 1) {
    if (method != "POST") return method_not_allowed();
    const json body = body_json(r.body);
    const auto id = service_.create_session(body.value("survey", json::object()), clock_());
    json out = service_.status_view(id);
    return {201, out};
  }
  const std::string& id = parts[1];
  if (parts.size() == 2) {
    if (method != "GET") return method_not_allowed();
    return {200, service_.status_view(id)};
  }
  if (parts.size() == 3 && parts[2] == "start") {
    if (method != "POST") return method_not_allowed();
    service_.start(id, clock_());
    return {200, service_.round_view(id)};
  }
  if (parts.size() == 3 && parts[2] == "round") {
    if (method != "GET") return method_not_allowed();
    return {200, service_.round_view(id)};
  }
  if (parts.size() == 5 && parts[2] == "round" && parts[4] == "ranking") {
    if (method != "POST") return method_not_allowed();
    const auto k = round_index(parts[3]);
    const auto at = clock_();
    const json body = body_json(r.body);
    require(body.is_object() && body.contains("ranking"), ErrorCode::kInvalidArgument,
            "body must be {\"ranking\": [...]}");
    return {200, service_.submit_ranking(id, k, body.at("ranking"), at)};
  }
  if (parts.size() == 3 && parts[2] == "finalize") {
    if (method != "POST") return method_not_allowed();
    return {200, service_.finalize(id, clock_())};
  }
  return error_response(404, to_string(ErrorCode::kNotFound), "no route for " + r.path);
}

}  // namespace unanimity::elicit
