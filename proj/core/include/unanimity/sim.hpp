#pragma once

// Monte-Carlo comparison of SD against the unanimous mechanisms on random
// markets, plus the persistence heterogeneity index and outcome perturbation.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "unanimity/mechanisms.hpp"
#include "unanimity/rng.hpp"
#include "unanimity/types.hpp"

namespace unanimity::sim {

enum class Mode { kBaseline, kNoAssist, kAssist, kVertical, kRace };

/// Shape of the evaluation noise: Uniform[0, 1] added on top of w, or
/// Uniform[-1, 1] centred on w. Both are scaled by alpha and clamped.
enum class NoiseShape { kOneSided, kSymmetric };

enum class MechanismKind { kSd, kSdi, kUttc, kAsdi, kSdOpt };

std::string_view to_string(Mode mode);
std::string_view to_string(MechanismKind kind);
std::string_view to_string(NoiseShape noise);
Mode parse_mode(std::string_view text);
MechanismKind parse_mechanism(std::string_view text);
NoiseShape parse_noise(std::string_view text);

struct SizeRange {
  std::size_t lo = 5;
  std::size_t hi = 10;
};

struct SimConfig {
  std::uint64_t n_sims = 1000;
  SizeRange children{};
  SizeRange homes{};
  double alpha = 0.0;
  Mode mode = Mode::kBaseline;
  NoiseShape noise = NoiseShape::kOneSided;
  std::uint64_t seed = 1;
  std::vector<MechanismKind> mechanisms{MechanismKind::kSd, MechanismKind::kSdi, MechanismKind::kUttc,
                                        MechanismKind::kAsdi};
  /// Race mode: category shares for children and for foster parents.
  std::vector<double> race_shares{0.45, 0.25, 0.20, 0.10};
  /// How SDI and ASDI pick a home inside the committed tier. Home ids are
  /// exchangeable in every mode, so kByHomeId is a uniformly random pick.
  TieBreakPolicy tie = TieBreakPolicy::kByHomeId;
  /// Vertical mode: drop the idiosyncratic term so every child ranks by q_h.
  bool common_quality_only = false;

  void validate() const;
};

/// Row-major C x H tables.
struct OutcomeModel {
  std::size_t children = 0;
  std::size_t homes = 0;
  std::vector<double> w;
  std::vector<double> v;
  std::vector<double> u;

  double welfare(ChildId c, HomeId h) const { return w[c.value * homes + h.value]; }
};

struct Replication {
  Problem problem;
  OutcomeModel model;
};

/// Draws replication `index` of the configured design. Only (seed, index)
/// determine the result.
Replication generate(const SimConfig& config, std::uint64_t index);

/// Strict ranking of all homes by descending utility; ties go to the lower id.
StrictRanking rank_by_utility(const double* utility, std::size_t homes);

/// Uniform random dictator order for replication `index`.
DictatorOrder replication_order(const SimConfig& config, std::uint64_t index, std::size_t children);

struct MechanismOutcome {
  MechanismKind mechanism{};
  Matching matching;
  std::size_t matched = 0;
  std::size_t unanimous = 0;
  std::size_t improvements = 0;  // sum of |I(c, mu(c))| over all children
  double persistence_sum = 0.0;
};

struct ReplicationResult {
  std::uint64_t index = 0;
  std::size_t children = 0;
  std::size_t homes = 0;
  DictatorOrder order;
  std::vector<MechanismOutcome> outcomes;  // in config.mechanisms order
};

ReplicationResult run_replication(const SimConfig& config, std::uint64_t index);

struct MetricsRow {
  std::string mechanism;
  double avg_persistence = 0.0;  // mean w over all matched children
  double pct_matched = 0.0;      // per-replication share, averaged
  double pct_unanimous = 0.0;    // per-replication |I*| / |C|, averaged
  double avg_improvements = 0.0;  // per replication
  std::uint64_t n_sims = 0;
};

struct BatchResult {
  std::vector<MetricsRow> rows;
  std::vector<ReplicationResult> replications;
};

/// Runs every replication, spread over `threads` workers (0 picks the
/// hardware count). Output does not depend on the thread count.
BatchResult run_batch(const SimConfig& config, unsigned threads = 1);

std::vector<MetricsRow> aggregate(const SimConfig& config, const std::vector<ReplicationResult>& reps);

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
void write_jsonl(std::ostream& out, const std::vector<ReplicationResult>& reps);

/// Binary outcome table over C x H, row-major.
struct OutcomeTable {
  std::size_t children = 0;
  std::size_t homes = 0;
  std::vector<std::uint8_t> cells;

  OutcomeTable() = default;
  OutcomeTable(std::size_t c, std::size_t h, std::uint8_t fill = 0) : children(c), homes(h), cells(c * h, fill) {}
  std::uint8_t at(std::size_t c, std::size_t h) const { return cells[c * homes + h]; }
  std::uint8_t& at(std::size_t c, std::size_t h) { return cells[c * homes + h]; }
};

struct Heterogeneity {
  double index = 0.0;
  /// p_s(c); empty for children that persist nowhere.
  std::vector<std::optional<double>> per_child;
};

/// With `exclude_empty`, children that persist at no home are left out of
/// the mean instead of counting as 0.
Heterogeneity heterogeneity_index(const OutcomeTable& table, bool exclude_empty = false);

using ErrorRate = std::function<double(std::size_t decile)>;

/// Decile (0..9) of each cell's confidence within the whole table, by rank.
std::vector<std::size_t> confidence_deciles(const std::vector<double>& confidence);

/// Flips each cell independently with probability error(decile of its
/// confidence).
OutcomeTable perturb_outcomes(const OutcomeTable& table, const ErrorRate& error,
                              const std::vector<double>& confidence, CounterRng& rng);

}  // namespace unanimity::sim
