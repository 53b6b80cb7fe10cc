#include "unanimity/types.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "unanimity/errors.hpp"

namespace unanimity {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kPreconditionViolation: return "precondition-violation";
    case ErrorCode::kResourceLimit: return "resource-limit";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kForbidden: return "forbidden";
    case ErrorCode::kUnavailable: return "service-unavailable";
  }
  return "unknown";
}

StrictRanking::StrictRanking(std::vector<HomeId> order) : order_(std::move(order)) {
  std::vector<HomeId> sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
          ErrorCode::kInvalidArgument, "ranking lists a home twice");
}

StrictRanking::StrictRanking(std::initializer_list<std::uint32_t> homes) {
  std::vector<HomeId> order;
  order.reserve(homes.size());
  for (auto h : homes) order.emplace_back(h);
  *this = StrictRanking(std::move(order));
}

bool StrictRanking::contains(HomeId h) const {
  return std::find(order_.begin(), order_.end(), h) != order_.end();
}

std::optional<std::size_t> StrictRanking::position(HomeId h) const {
  auto it = std::find(order_.begin(), order_.end(), h);
  if (it == order_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - order_.begin());
}

bool StrictRanking::prefers(Slot a, Slot b) const {
  auto key = [&](Slot s) -> std::size_t {
    if (!s) return order_.size();
    auto p = position(*s);
    return p ? *p : std::numeric_limits<std::size_t>::max();
  };
  return key(a) < key(b);
}

WeakRanking::WeakRanking(std::vector<std::vector<HomeId>> tiers) {
  std::vector<HomeId> seen;
  for (auto& tier : tiers) {
    if (tier.empty()) continue;
    for (HomeId h : tier) {
      require(std::find(seen.begin(), seen.end(), h) == seen.end(), ErrorCode::kInvalidArgument,
              "weak ranking tiers overlap");
      seen.push_back(h);
    }
    std::sort(tier.begin(), tier.end());
    tiers_.push_back(std::move(tier));
  }
}

std::optional<std::size_t> WeakRanking::tier_of(HomeId h) const {
  for (std::size_t t = 0; t < tiers_.size(); ++t) {
    if (std::binary_search(tiers_[t].begin(), tiers_[t].end(), h)) return t;
  }
  return std::nullopt;
}

int WeakRanking::compare(Slot a, Slot b) const {
  // outside option sits just below the last tier; unlisted homes below it
  auto key = [&](Slot s) -> std::size_t {
    if (!s) return tiers_.size();
    auto t = tier_of(*s);
    return t ? *t : tiers_.size() + 1;
  };
  const auto ka = key(a);
  const auto kb = key(b);
  if (ka == kb) return 0;
  return ka < kb ? 1 : -1;
}

namespace {

std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

}  // namespace

Market::Market(std::size_t children, std::size_t homes)
    : children_(children),
      homes_(homes),
      complete_(true),
      feasible_(children * homes, 1),
      child_labels_(default_labels(children)),
      home_labels_(default_labels(homes)) {
  require(homes < Problem::kUnlisted, ErrorCode::kInvalidArgument, "too many homes");
}

Market::Market(std::size_t children, std::size_t homes,
               std::span<const std::pair<ChildId, HomeId>> edges)
    : Market(children, homes) {
  std::fill(feasible_.begin(), feasible_.end(), 0);
  for (auto [c, h] : edges) {
    require(contains(c) && contains(h), ErrorCode::kInvalidArgument,
            "edge references an unknown child or home");
    feasible_[c.value * homes_ + h.value] = 1;
  }
  complete_ = std::all_of(feasible_.begin(), feasible_.end(), [](auto f) { return f != 0; });
}

bool Market::feasible(ChildId c, HomeId h) const {
  if (!contains(c) || !contains(h)) return false;
  return complete_ || feasible_[c.value * homes_ + h.value] != 0;
}

std::vector<ChildId> Market::children() const {
  std::vector<ChildId> out;
  out.reserve(children_);
  for (std::uint32_t i = 0; i < children_; ++i) out.emplace_back(i);
  return out;
}

std::vector<HomeId> Market::homes() const {
  std::vector<HomeId> out;
  out.reserve(homes_);
  for (std::uint32_t i = 0; i < homes_; ++i) out.emplace_back(i);
  return out;
}

std::vector<HomeId> Market::feasible_homes(ChildId c) const {
  std::vector<HomeId> out;
  for (std::uint32_t i = 0; i < homes_; ++i) {
    if (feasible(c, HomeId{i})) out.emplace_back(i);
  }
  return out;
}

std::vector<std::pair<ChildId, HomeId>> Market::edges() const {
  std::vector<std::pair<ChildId, HomeId>> out;
  for (std::uint32_t c = 0; c < children_; ++c) {
    for (std::uint32_t h = 0; h < homes_; ++h) {
      if (feasible(ChildId{c}, HomeId{h})) out.emplace_back(ChildId{c}, HomeId{h});
    }
  }
  return out;
}

std::optional<ChildId> Market::find_child(std::string_view label) const {
  for (std::uint32_t i = 0; i < child_labels_.size(); ++i) {
    if (child_labels_[i] == label) return ChildId{i};
  }
  return std::nullopt;
}

std::optional<HomeId> Market::find_home(std::string_view label) const {
  for (std::uint32_t i = 0; i < home_labels_.size(); ++i) {
    if (home_labels_[i] == label) return HomeId{i};
  }
  return std::nullopt;
}

void Market::set_labels(std::vector<std::string> child_labels, std::vector<std::string> home_labels) {
  require(child_labels.size() == children_ && home_labels.size() == homes_,
          ErrorCode::kInvalidArgument, "label count does not match the market");
  auto unique = [](const std::vector<std::string>& v) {
    std::unordered_set<std::string> s(v.begin(), v.end());
    return s.size() == v.size();
  };
  require(unique(child_labels) && unique(home_labels), ErrorCode::kInvalidArgument,
          "labels must be unique");
  child_labels_ = std::move(child_labels);
  home_labels_ = std::move(home_labels);
}

Problem::Problem(Market market, std::vector<StrictRanking> prefs, std::vector<StrictRanking> evals)
    : market_(std::move(market)), prefs_(std::move(prefs)), evals_(std::move(evals)) {
  const auto n = market_.child_count();
  const auto k = market_.home_count();
  require(prefs_.size() == n && evals_.size() == n, ErrorCode::kInvalidArgument,
          "one preference and one evaluation ranking per child is required");
  pref_rank_.assign(n * k, kUnlisted);
  eval_rank_.assign(n * k, kUnlisted);
  auto fill = [&](const std::vector<StrictRanking>& rankings, std::vector<std::uint16_t>& table) {
    for (std::uint32_t c = 0; c < n; ++c) {
      const auto& r = rankings[c];
      for (std::size_t pos = 0; pos < r.size(); ++pos) {
        const HomeId h = r[pos];
        require(market_.contains(h), ErrorCode::kInvalidArgument, "ranking names an unknown home");
        require(market_.feasible(ChildId{c}, h), ErrorCode::kInvalidArgument,
                "ranking names a home that is not feasible for the child");
        table[c * k + h.value] = static_cast<std::uint16_t>(pos);
      }
    }
  };
  fill(prefs_, pref_rank_);
  fill(evals_, eval_rank_);
}

Problem Problem::with_pref(ChildId c, StrictRanking pref) const {
  auto prefs = prefs_;
  prefs.at(c.value) = std::move(pref);
  return Problem(market_, std::move(prefs), evals_);
}

Problem Problem::with_eval(ChildId c, StrictRanking eval) const {
  auto evals = evals_;
  evals.at(c.value) = std::move(eval);
  return Problem(market_, prefs_, std::move(evals));
}

Matching::Matching(std::initializer_list<Slot> slots) {
  home_.reserve(slots.size());
  for (const auto& s : slots) home_.push_back(s ? static_cast<std::int32_t>(s->value) : -1);
}

Matching Matching::from_slots(std::span<const Slot> slots) {
  Matching m(slots.size());
  for (std::uint32_t c = 0; c < slots.size(); ++c) m.assign(ChildId{c}, slots[c]);
  return m;
}

std::size_t Matching::matched_count() const {
  return static_cast<std::size_t>(std::count_if(home_.begin(), home_.end(), [](auto h) { return h >= 0; }));
}

std::vector<std::optional<ChildId>> Matching::holders(std::size_t home_count) const {
  std::vector<std::optional<ChildId>> out(home_count);
  for (std::uint32_t c = 0; c < home_.size(); ++c) {
    const auto h = home_[c];
    if (h >= 0 && static_cast<std::size_t>(h) < home_count && !out[h]) out[h] = ChildId{c};
  }
  return out;
}

bool Matching::injective() const {
  std::vector<std::int32_t> used;
  for (auto h : home_) {
    if (h < 0) continue;
    if (std::find(used.begin(), used.end(), h) != used.end()) return false;
    used.push_back(h);
  }
  return true;
}

bool Matching::feasible(const Market& market) const {
  if (home_.size() != market.child_count() || !injective()) return false;
  for (std::uint32_t c = 0; c < home_.size(); ++c) {
    if (home_[c] >= 0 && !market.feasible(ChildId{c}, HomeId{static_cast<std::uint32_t>(home_[c])}))
      return false;
  }
  return true;
}

void Matching::validate(const Market& market) const {
  require(home_.size() == market.child_count(), ErrorCode::kInvalidArgument,
          "matching size does not match the market");
  require(injective(), ErrorCode::kInvalidArgument, "matching assigns a home twice");
  require(feasible(market), ErrorCode::kInvalidArgument, "matching uses an infeasible pair");
}

std::string describe(const Market& market, const Matching& m) {
  std::string out = "(";
  for (std::uint32_t c = 0; c < m.child_count(); ++c) {
    if (c) out += ", ";
    const Slot h = m[ChildId{c}];
    out += h ? market.home_label(*h) : std::string("-");
  }
  return out + ")";
}

std::string describe(const Market& market, const StrictRanking& r) {
  std::string out = "(";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out += ", ";
    out += market.home_label(r[i]);
  }
  return out + ")";
}

}  // namespace unanimity
