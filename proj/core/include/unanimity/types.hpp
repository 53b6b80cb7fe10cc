#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace unanimity {

template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(Id, Id) = default;
};

struct ChildTag;
struct HomeTag;

/// Dense identifiers: a market with n children uses ChildId{0} .. ChildId{n-1}.
/// Human-facing names live in the market's label tables.
using ChildId = Id<ChildTag>;
using HomeId = Id<HomeTag>;

/// A home or the outside option. std::nullopt stands for the empty assignment.
using Slot = std::optional<HomeId>;

/// Selects the child's own ranking or the matchmaker's evaluation of the child.
enum class PrefOrEval { kPreference, kEvaluation };

/// A strict order over the acceptable homes, best first. Homes missing from the
/// sequence rank below the outside option.
class StrictRanking {
 public:
  StrictRanking() = default;
  explicit StrictRanking(std::vector<HomeId> order);
  StrictRanking(std::initializer_list<std::uint32_t> homes);

  const std::vector<HomeId>& order() const noexcept { return order_; }
  std::size_t size() const noexcept { return order_.size(); }
  bool empty() const noexcept { return order_.empty(); }
  auto begin() const noexcept { return order_.begin(); }
  auto end() const noexcept { return order_.end(); }
  HomeId operator[](std::size_t i) const { return order_[i]; }

  bool contains(HomeId h) const;
  std::optional<std::size_t> position(HomeId h) const;

  /// Strict comparison over homes and the outside option.
  bool prefers(Slot a, Slot b) const;

  friend bool operator==(const StrictRanking&, const StrictRanking&) = default;
  friend auto operator<=>(const StrictRanking&, const StrictRanking&) = default;

 private:
  std::vector<HomeId> order_;
};

/// Ordered indifference classes, best first. Homes in no tier are unacceptable.
class WeakRanking {
 public:
  WeakRanking() = default;
  explicit WeakRanking(std::vector<std::vector<HomeId>> tiers);

  const std::vector<std::vector<HomeId>>& tiers() const noexcept { return tiers_; }
  std::size_t tier_count() const noexcept { return tiers_.size(); }
  std::optional<std::size_t> tier_of(HomeId h) const;

  /// Positive when a is strictly preferred, negative when b is, zero on ties.
  int compare(Slot a, Slot b) const;

  friend bool operator==(const WeakRanking&, const WeakRanking&) = default;

 private:
  std::vector<std::vector<HomeId>> tiers_;
};

class Market {
 public:
  Market() = default;
  Market(std::size_t children, std::size_t homes);
  Market(std::size_t children, std::size_t homes,
         std::span<const std::pair<ChildId, HomeId>> edges);

  std::size_t child_count() const noexcept { return children_; }
  std::size_t home_count() const noexcept { return homes_; }
  bool complete() const noexcept { return complete_; }

  bool contains(ChildId c) const noexcept { return c.value < children_; }
  bool contains(HomeId h) const noexcept { return h.value < homes_; }
  bool feasible(ChildId c, HomeId h) const;

  std::vector<ChildId> children() const;
  std::vector<HomeId> homes() const;
  std::vector<HomeId> feasible_homes(ChildId c) const;
  std::vector<std::pair<ChildId, HomeId>> edges() const;

  const std::string& child_label(ChildId c) const { return child_labels_.at(c.value); }
  const std::string& home_label(HomeId h) const { return home_labels_.at(h.value); }
  std::optional<ChildId> find_child(std::string_view label) const;
  std::optional<HomeId> find_home(std::string_view label) const;

  /// Replaces the default labels ("0", "1", ...). Labels must be unique per side.
  void set_labels(std::vector<std::string> child_labels, std::vector<std::string> home_labels);

  friend bool operator==(const Market&, const Market&) = default;

 private:
  std::size_t children_ = 0;
  std::size_t homes_ = 0;
  bool complete_ = true;
  std::vector<std::uint8_t> feasible_;
  std::vector<std::string> child_labels_;
  std::vector<std::string> home_labels_;
};

/// A market together with every child's preference and evaluation ranking.
/// Immutable after construction; rank lookups are precomputed.
class Problem {
 public:
  static constexpr std::uint16_t kUnlisted = 0xFFFF;

  Problem() = default;
  Problem(Market market, std::vector<StrictRanking> prefs, std::vector<StrictRanking> evals);

  const Market& market() const noexcept { return market_; }
  std::size_t child_count() const noexcept { return market_.child_count(); }
  std::size_t home_count() const noexcept { return market_.home_count(); }

  const StrictRanking& pref(ChildId c) const { return prefs_.at(c.value); }
  const StrictRanking& eval(ChildId c) const { return evals_.at(c.value); }
  const StrictRanking& ranking(PrefOrEval which, ChildId c) const {
    return which == PrefOrEval::kPreference ? pref(c) : eval(c);
  }
  const std::vector<StrictRanking>& prefs() const noexcept { return prefs_; }
  const std::vector<StrictRanking>& evals() const noexcept { return evals_; }

  /// Position of h in the chosen ranking; the outside option sits at the list
  /// length and unlisted homes share kUnlisted. Smaller is better.
  std::uint16_t rank(PrefOrEval which, ChildId c, Slot h) const {
    const auto& list = which == PrefOrEval::kPreference ? pref_rank_ : eval_rank_;
    if (!h) return static_cast<std::uint16_t>(ranking(which, c).size());
    return list[c.value * market_.home_count() + h->value];
  }

  bool prefers(PrefOrEval which, ChildId c, Slot a, Slot b) const {
    return rank(which, c, a) < rank(which, c, b);
  }
  bool acceptable(PrefOrEval which, ChildId c, HomeId h) const {
    return rank(which, c, h) != kUnlisted;
  }
  bool unanimously_acceptable(ChildId c, HomeId h) const {
    return acceptable(PrefOrEval::kPreference, c, h) && acceptable(PrefOrEval::kEvaluation, c, h);
  }

  /// Copies of the problem with one child's report replaced.
  Problem with_pref(ChildId c, StrictRanking pref) const;
  Problem with_eval(ChildId c, StrictRanking eval) const;

  friend bool operator==(const Problem& a, const Problem& b) {
    return a.market_ == b.market_ && a.prefs_ == b.prefs_ && a.evals_ == b.evals_;
  }

 private:
  Market market_;
  std::vector<StrictRanking> prefs_;
  std::vector<StrictRanking> evals_;
  std::vector<std::uint16_t> pref_rank_;
  std::vector<std::uint16_t> eval_rank_;
};

/// Child-keyed assignment. One-to-one is a checked property, not a
/// representation guarantee, so the same type carries over-capacitated
/// allocations such as those produced by random serial assignment.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t child_count) : home_(child_count, -1) {}
  Matching(std::initializer_list<Slot> slots);
  static Matching from_slots(std::span<const Slot> slots);

  std::size_t child_count() const noexcept { return home_.size(); }
  Slot operator[](ChildId c) const {
    const auto h = home_.at(c.value);
    return h < 0 ? Slot{} : Slot{HomeId{static_cast<std::uint32_t>(h)}};
  }
  void assign(ChildId c, Slot h) { home_.at(c.value) = h ? static_cast<std::int32_t>(h->value) : -1; }
  bool matched(ChildId c) const { return home_.at(c.value) >= 0; }
  std::size_t matched_count() const;

  /// Home-keyed view. For non-injective assignments the lowest child wins.
  std::vector<std::optional<ChildId>> holders(std::size_t home_count) const;
  bool injective() const;
  bool feasible(const Market& market) const;
  /// Throws kInvalidArgument unless the matching is one-to-one and respects edges.
  void validate(const Market& market) const;

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<std::int32_t> home_;
};

/// Renders a matching with the market's labels, e.g. "(3, 2, 1, 4)" or "(1, -)".
std::string describe(const Market& market, const Matching& m);
std::string describe(const Market& market, const StrictRanking& r);

}  // namespace unanimity
