#pragma once

// Incentivized preference elicitation. Subjects play five rounds, each as
// the caseworker of one child in a 5 x 5 market, and are matched by RSA
// against a private availability draw. Payoffs are revealed only when the
// session is finalized.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "unanimity/errors.hpp"
#include "unanimity/mechanisms.hpp"
#include "unanimity/types.hpp"

namespace unanimity::elicit {

using nlohmann::json;

inline constexpr std::size_t kMarketSize = 5;

struct PayoffRule {
  int persist = 5;
  int fail = -5;
  int unmatched = -2;  // also charged on timeout
  std::int64_t unit_value_cents = 10;
  std::int64_t base_fee_cents = 1000;
};

struct MarketSpec {
  std::string id;
  std::vector<std::string> child_labels;
  std::vector<std::string> home_labels;
  std::vector<std::string> child_profiles;
  std::vector<std::string> home_profiles;
  /// persistence[c][h] is 1 when child c would persist at home h.
  std::vector<std::vector<std::uint8_t>> persistence;
};

struct ExperimentConfig {
  std::vector<MarketSpec> markets;
  std::size_t rounds_per_subject = 5;
  double availability_prob = 0.5;
  std::int64_t round_time_limit_ms = 600'000;
  PayoffRule payoff{};
  std::uint64_t seed = 1;

  void validate() const;
};

ExperimentConfig config_from_json(const json& j);
json to_json(const ExperimentConfig& config);

/// Dry-run configuration: markets drawn from the baseline simulation model,
/// with a child persisting at a home when its welfare draw is at least 1/2.
ExperimentConfig synthetic_config(std::size_t markets, std::uint64_t seed);

struct RoundOutcome {
  Slot match;
  int units = 0;
};

/// What one round pays: RSA against the availability draw, then the payoff rule.
RoundOutcome score_round(const StrictRanking& ranking, const AvailabilityFn& availability,
                         const std::vector<std::uint8_t>& persistence_row, const PayoffRule& payoff,
                         bool timed_out = false);

enum class Status { kInstructions, kInRound, kFinished };
const char* to_string(Status status);

struct RoundState {
  std::size_t market = 0;
  std::size_t child = 0;
  AvailabilityFn availability;
  std::optional<std::int64_t> started_ms;
  std::optional<StrictRanking> ranking;
  std::optional<std::int64_t> submitted_ms;
  bool timed_out = false;

  std::optional<std::int64_t> deadline_ms(std::int64_t limit) const {
    return started_ms ? std::optional(*started_ms + limit) : std::nullopt;
  }
};

struct Session {
  std::string id;
  json survey = json::object();
  std::vector<RoundState> rounds;
  std::size_t current = 0;
  Status status = Status::kInstructions;
  bool finalized = false;
  std::int64_t created_ms = 0;
};

/// Session store backed by an append-only JSON-lines event log. All public
/// members are safe to call concurrently.
class Service {
 public:
  /// `log` may be null. Events are written and flushed one line at a time.
  explicit Service(ExperimentConfig config, std::ostream* log = nullptr);

  /// Rebuilds state from a log written by an earlier instance. Further
  /// events go to `log`, if given.
  static std::unique_ptr<Service> replay(ExperimentConfig config, std::istream& events,
                                         std::ostream* log = nullptr);

  const ExperimentConfig& config() const noexcept { return config_; }

  std::string create_session(const json& survey, std::int64_t at_ms);
  /// Leaves the instructions and starts round 0.
  void start(const std::string& id, std::int64_t at_ms);
  /// Subject-facing view of the current round. Never contains availability.
  json round_view(const std::string& id) const;
  json status_view(const std::string& id) const;
  /// Records the ranking for round k and starts the next round. Late
  /// submissions are recorded as timeouts.
  json submit_ranking(const std::string& id, std::size_t round, const json& ranking, std::int64_t at_ms);
  /// Reveals matches, persistence and payoffs. Repeated calls return the
  /// same result.
  json finalize(const std::string& id, std::int64_t at_ms);
  json export_preferences(bool include_unfinished = false) const;

  /// Copy of a session for inspection by tests and the admin tools.
  std::optional<Session> inspect(const std::string& id) const;
  std::size_t session_count() const;

 private:
  void apply(const json& event);
  void emit(const json& event);
  Session& find(const std::string& id);
  const Session& find(const std::string& id) const;
  json results(const Session& s) const;
  json new_session_event(const json& survey, std::int64_t at_ms);

  ExperimentConfig config_;
  std::ostream* log_;
  mutable std::mutex mu_;
  std::map<std::string, Session> sessions_;
  std::vector<std::string> order_;  // creation order
  std::vector<std::vector<std::uint8_t>> taken_;  // [market][child]
  std::uint64_t created_ = 0;
};

struct Request {
  std::string method;
  std::string path;
  std::string body;
  std::map<std::string, std::string> headers;  // lower-case names
  std::map<std::string, std::string> query;
};

struct Response {
  int status = 200;
  json body;
};

int http_status(ErrorCode code);

/// HTTP routing without any transport: maps requests onto a Service.
class Router {
 public:
  using Clock = std::function<std::int64_t()>;

  /// An empty admin token disables the admin endpoints.
  Router(Service& service, std::string admin_token, Clock clock);

  Response handle(const Request& request) const;

 private:
  Response dispatch(const Request& request) const;

  Service& service_;
  std::string admin_token_;
  Clock clock_;
};

}  // namespace unanimity::elicit
