#include "unanimity/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "unanimity/errors.hpp"
#include "unanimity/unanimity.hpp"

namespace unanimity::sim {
namespace {

// Substreams of a replication's RNG key.
enum Stream : std::uint64_t { kSizes, kWelfare, kNoise, kTaste, kQuality, kRace, kOrder };

constexpr std::string_view kModeNames[] = {"baseline", "no_assist", "assist", "vertical", "race"};
constexpr std::string_view kMechanismNames[] = {"SD", "SDI", "UTTC", "ASDI", "SD-OPT"};
constexpr std::string_view kNoiseNames[] = {"one_sided", "symmetric"};

std::vector<double> draw_uniform(CounterRng rng, std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = rng.uniform();
  return out;
}

std::size_t draw_category(CounterRng& rng, const std::vector<double>& shares, double total) {
  double x = rng.uniform() * total;
  for (std::size_t i = 0; i + 1 < shares.size(); ++i) {
    if (x < shares[i]) return i;
    x -= shares[i];
  }
  return shares.size() - 1;
}

Matching run_mechanism(const SimConfig& config, MechanismKind kind, const Problem& p, const DictatorOrder& order,
                       const std::optional<Matching>& sdi_out) {
  switch (kind) {
    case MechanismKind::kSd:
      return sd(p, order, PrefOrEval::kPreference);
    case MechanismKind::kSdOpt:
      return sd(p, order, PrefOrEval::kEvaluation);
    case MechanismKind::kSdi:
      return sdi_out ? *sdi_out : sdi(p, order, config.tie);
    case MechanismKind::kAsdi:
      return asdi(p, order, config.tie);
    case MechanismKind::kUttc: {
      const Matching seed = sdi_out ? *sdi_out : sdi(p, order, config.tie);
      return uttc(p, seed, {PointingOrder::kEvaluation, false});
    }
  }
  return Matching(p.child_count());
}

}  // namespace

std::string_view to_string(Mode mode) { return kModeNames[static_cast<int>(mode)]; }
std::string_view to_string(MechanismKind kind) { return kMechanismNames[static_cast<int>(kind)]; }

std::string_view to_string(NoiseShape noise) { return kNoiseNames[static_cast<int>(noise)]; }

NoiseShape parse_noise(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kNoiseNames); ++i) {
    if (kNoiseNames[i] == text) return static_cast<NoiseShape>(i);
  }
  fail(ErrorCode::kInvalidArgument, "unknown noise shape '" + std::string(text) + "'");
}

Mode parse_mode(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kModeNames); ++i) {
    if (kModeNames[i] == text) return static_cast<Mode>(i);
  }
  if (text == "no-assist") return Mode::kNoAssist;
  fail(ErrorCode::kInvalidArgument, "unknown simulation mode '" + std::string(text) + "'");
}

MechanismKind parse_mechanism(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) {
    return ch == '_' ? '-' : static_cast<char>(std::toupper(ch));
  });
  for (std::size_t i = 0; i < std::size(kMechanismNames); ++i) {
    if (kMechanismNames[i] == up) return static_cast<MechanismKind>(i);
  }
  fail(ErrorCode::kInvalidArgument, "unknown mechanism '" + std::string(text) + "'");
}

void SimConfig::validate() const {
  require(children.lo >= 1 && children.lo <= children.hi, ErrorCode::kInvalidArgument, "bad children range");
  require(homes.lo >= 1 && homes.lo <= homes.hi, ErrorCode::kInvalidArgument, "bad homes range");
  require(children.hi <= 4096 && homes.hi <= 4096, ErrorCode::kInvalidArgument, "market too large");
  require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  require(!mechanisms.empty(), ErrorCode::kInvalidArgument, "no mechanisms selected");
  if (mode == Mode::kRace) {
    require(!race_shares.empty(), ErrorCode::kInvalidArgument, "race mode needs category shares");
    for (double s : race_shares) require(s >= 0.0, ErrorCode::kInvalidArgument, "negative race share");
    require(std::accumulate(race_shares.begin(), race_shares.end(), 0.0) > 0.0, ErrorCode::kInvalidArgument,
            "race shares sum to zero");
  }
}

StrictRanking rank_by_utility(const double* utility, std::size_t homes) {
  std::vector<HomeId> order;
  order.reserve(homes);
  for (std::uint32_t h = 0; h < homes; ++h) order.emplace_back(h);
  std::stable_sort(order.begin(), order.end(),
                   [utility](HomeId a, HomeId b) { return utility[a.value] > utility[b.value]; });
  return StrictRanking(std::move(order));
}

Replication generate(const SimConfig& config, std::uint64_t index) {
  config.validate();
  CounterRng sizes(config.seed, index, kSizes);
  const auto nc = static_cast<std::size_t>(sizes.between(static_cast<std::int64_t>(config.children.lo),
                                                         static_cast<std::int64_t>(config.children.hi)));
  const auto nh = static_cast<std::size_t>(sizes.between(static_cast<std::int64_t>(config.homes.lo),
                                                         static_cast<std::int64_t>(config.homes.hi)));
  const std::size_t cells = nc * nh;

  OutcomeModel model{nc, nh, draw_uniform(CounterRng(config.seed, index, kWelfare), cells), {}, {}};
  const double alpha = config.mode == Mode::kBaseline ? 0.0 : config.alpha;
  const auto eps = draw_uniform(CounterRng(config.seed, index, kNoise), cells);
  model.v.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    const double e = config.noise == NoiseShape::kSymmetric ? 2.0 * eps[i] - 1.0 : eps[i];
    model.v[i] = std::clamp(model.w[i] + alpha * e, 0.0, 1.0);
  }

  auto taste = draw_uniform(CounterRng(config.seed, index, kTaste), cells);
  switch (config.mode) {
    case Mode::kBaseline:
    case Mode::kNoAssist:
      model.u = std::move(taste);
      break;
    case Mode::kAssist:
      model.u = std::move(taste);
      for (std::size_t i = 0; i < cells; ++i) {
        const bool false_negative = model.w[i] >= 0.5 && model.v[i] < 0.5;
        const bool false_positive = model.w[i] < 0.5 && model.v[i] >= 0.5;
        if (false_negative || false_positive) model.u[i] = model.w[i];
      }
      break;
    case Mode::kVertical: {
      const auto quality = draw_uniform(CounterRng(config.seed, index, kQuality), nh);
      model.u.resize(cells);
      for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t h = 0; h < nh; ++h) {
          model.u[c * nh + h] = quality[h] + (config.common_quality_only ? 0.0 : taste[c * nh + h]);
        }
      }
      break;
    }
    case Mode::kRace: {
      CounterRng rng(config.seed, index, kRace);
      const double total = std::accumulate(config.race_shares.begin(), config.race_shares.end(), 0.0);
      std::vector<std::size_t> child_race(nc), parent_race(nh);
      for (auto& x : child_race) x = draw_category(rng, config.race_shares, total);
      for (auto& x : parent_race) x = draw_category(rng, config.race_shares, total);
      // same-race homes form the top tier; the taste draw orders homes inside a tier
      model.u.resize(cells);
      for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t h = 0; h < nh; ++h) {
          model.u[c * nh + h] = (child_race[c] == parent_race[h] ? 1.0 : 0.0) + 0.5 * taste[c * nh + h];
        }
      }
      break;
    }
  }

  std::vector<StrictRanking> prefs, evals;
  prefs.reserve(nc);
  evals.reserve(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    prefs.push_back(rank_by_utility(model.u.data() + c * nh, nh));
    evals.push_back(rank_by_utility(model.v.data() + c * nh, nh));
  }
  return {Problem(Market(nc, nh), std::move(prefs), std::move(evals)), std::move(model)};
}

DictatorOrder replication_order(const SimConfig& config, std::uint64_t index, std::size_t children) {
  DictatorOrder order;
  order.reserve(children);
  for (std::uint32_t c = 0; c < children; ++c) order.emplace_back(c);
  CounterRng rng(config.seed, index, kOrder);
  rng.shuffle(order.begin(), order.end());
  return order;
}

ReplicationResult run_replication(const SimConfig& config, std::uint64_t index) {
  const auto rep = generate(config, index);
  const Problem& p = rep.problem;
  ReplicationResult out{index, rep.model.children, rep.model.homes,
                        replication_order(config, index, rep.model.children), {}};

  std::optional<Matching> sdi_out;
  const bool needs_sdi = std::any_of(config.mechanisms.begin(), config.mechanisms.end(), [](MechanismKind k) {
    return k == MechanismKind::kSdi || k == MechanismKind::kUttc;
  });
  if (needs_sdi) sdi_out = sdi(p, out.order, config.tie);

  for (const auto kind : config.mechanisms) {
    MechanismOutcome o{kind, run_mechanism(config, kind, p, out.order, sdi_out)};
    for (const auto c : p.market().children()) {
      // an unmatched child counts every unanimously acceptable home
      const Slot h = o.matching[c];
      o.improvements += improvers(p, c, h).size();
      if (!h) continue;
      ++o.matched;
      o.persistence_sum += rep.model.welfare(c, *h);
    }
    o.unanimous = unanimous_children(p, o.matching).size();
    out.outcomes.push_back(std::move(o));
  }
  return out;
}

std::vector<MetricsRow> aggregate(const SimConfig& config, const std::vector<ReplicationResult>& reps) {
  std::vector<MetricsRow> rows;
  for (std::size_t k = 0; k < config.mechanisms.size(); ++k) {
    double persistence = 0.0, matched_share = 0.0, unanimous_share = 0.0;
    std::uint64_t matched = 0, improvements = 0;
    for (const auto& rep : reps) {
      const auto& o = rep.outcomes.at(k);
      const double n = static_cast<double>(std::max<std::size_t>(rep.children, 1));
      persistence += o.persistence_sum;
      matched += o.matched;
      matched_share += static_cast<double>(o.matched) / n;
      unanimous_share += static_cast<double>(o.unanimous) / n;
      improvements += o.improvements;
    }
    MetricsRow row;
    row.mechanism = std::string(to_string(config.mechanisms[k]));
    row.n_sims = reps.size();
    if (matched > 0) row.avg_persistence = persistence / static_cast<double>(matched);
    if (!reps.empty()) {
      const double n = static_cast<double>(reps.size());
      row.pct_matched = matched_share / n;
      row.pct_unanimous = unanimous_share / n;
      row.avg_improvements = static_cast<double>(improvements) / n;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

BatchResult run_batch(const SimConfig& config, unsigned threads) {
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, config.n_sims)));

  BatchResult result;
  result.replications.resize(config.n_sims);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= config.n_sims || failed.load()) return;
      try {
        result.replications[i] = run_replication(config, i);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  result.rows = aggregate(config, result.replications);
  return result;
}

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << "mechanism,avg_persistence,pct_matched,pct_unanimous,avg_improvements,n_sims\n";
  const auto old = out.precision(10);
  for (const auto& r : rows) {
    out << r.mechanism << ',' << r.avg_persistence << ',' << r.pct_matched << ',' << r.pct_unanimous << ','
        << r.avg_improvements << ',' << r.n_sims << '\n';
  }
  out.precision(old);
}

void write_jsonl(std::ostream& out, const std::vector<ReplicationResult>& reps) {
  for (const auto& rep : reps) {
    nlohmann::json j;
    j["replication"] = rep.index;
    j["children"] = rep.children;
    j["homes"] = rep.homes;
    auto& order = j["order"] = nlohmann::json::array();
    for (const auto c : rep.order) order.push_back(c.value);
    auto& mechs = j["mechanisms"] = nlohmann::json::object();
    for (const auto& o : rep.outcomes) {
      nlohmann::json slots = nlohmann::json::array();
      for (std::uint32_t c = 0; c < rep.children; ++c) {
        const Slot h = o.matching[ChildId{c}];
        slots.push_back(h ? nlohmann::json(h->value) : nlohmann::json(nullptr));
      }
      mechs[std::string(to_string(o.mechanism))] = {{"matching", std::move(slots)},
                                                    {"matched", o.matched},
                                                    {"unanimous", o.unanimous},
                                                    {"improvements", o.improvements},
                                                    {"persistence_sum", o.persistence_sum}};
    }
    out << j.dump() << '\n';
  }
}

Heterogeneity heterogeneity_index(const OutcomeTable& table, bool exclude_empty) {
  require(table.children > 0 && table.homes > 0, ErrorCode::kInvalidArgument, "empty outcome table");
  require(table.cells.size() == table.children * table.homes, ErrorCode::kInvalidArgument,
          "outcome table has the wrong size");
  std::vector<std::size_t> column(table.homes, 0);
  for (std::size_t c = 0; c < table.children; ++c) {
    for (std::size_t h = 0; h < table.homes; ++h) column[h] += table.at(c, h) != 0;
  }
  const double others = static_cast<double>(table.children - 1);

  Heterogeneity out;
  out.per_child.resize(table.children);
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < table.children; ++c) {
    double share = 0.0;
    std::size_t persists = 0;
    for (std::size_t h = 0; h < table.homes; ++h) {
      if (!table.at(c, h)) continue;
      ++persists;
      if (others > 0) share += static_cast<double>(column[h] - 1) / others;
    }
    if (persists > 0) {
      out.per_child[c] = share / static_cast<double>(persists);
      sum += *out.per_child[c];
      ++counted;
    } else if (!exclude_empty) {
      ++counted;
    }
  }
  out.index = counted > 0 ? sum / static_cast<double>(counted) : 0.0;
  return out;
}

std::vector<std::size_t> confidence_deciles(const std::vector<double>& confidence) {
  const std::size_t n = confidence.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return confidence[a] < confidence[b]; });
  std::vector<std::size_t> out(n);
  for (std::size_t rank = 0; rank < n; ++rank) out[idx[rank]] = rank * 10 / n;
  return out;
}

OutcomeTable perturb_outcomes(const OutcomeTable& table, const ErrorRate& error,
                              const std::vector<double>& confidence, CounterRng& rng) {
  require(confidence.size() == table.cells.size(), ErrorCode::kInvalidArgument,
          "confidence must score every cell");
  double rates[10];
  for (std::size_t d = 0; d < 10; ++d) {
    rates[d] = error(d);
    require(rates[d] >= 0.0 && rates[d] <= 1.0, ErrorCode::kInvalidArgument, "error rate outside [0, 1]");
  }
  const auto deciles = confidence_deciles(confidence);
  OutcomeTable out = table;
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    if (rng.bernoulli(rates[deciles[i]])) out.cells[i] = out.cells[i] ? 0 : 1;
  }
  return out;
}

}  // namespace unanimity::sim
