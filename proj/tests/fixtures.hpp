#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "unanimity/types.hpp"

namespace unanimity::testing {

// Homes are written 1-based as in the worked examples.
inline StrictRanking r(std::initializer_list<int> homes) {
  std::vector<HomeId> out;
  for (int h : homes) out.emplace_back(static_cast<std::uint32_t>(h - 1));
  return StrictRanking(std::move(out));
}

inline Slot s(int home) { return home == 0 ? Slot{} : Slot{HomeId{static_cast<std::uint32_t>(home - 1)}}; }

inline Matching m(std::initializer_list<int> homes) {
  std::vector<Slot> slots;
  for (int h : homes) slots.push_back(s(h));
  return Matching::from_slots(slots);
}

inline Market labelled(std::size_t children, std::size_t homes) {
  Market market(children, homes);
  std::vector<std::string> cl, hl;
  for (std::size_t c = 0; c < children; ++c) cl.push_back(std::string(1, static_cast<char>('a' + c)));
  for (std::size_t h = 0; h < homes; ++h) hl.push_back(std::to_string(h + 1));
  market.set_labels(cl, hl);
  return market;
}

// 4x4 market with a single unanimous matching
inline Problem nonexistence_market() {
  return Problem(labelled(4, 4), {r({1, 2, 3, 4}), r({1, 3, 2, 4}), r({1, 2, 3, 4}), r({4, 3, 2, 1})},
                 {r({4, 3, 1, 2}), r({2, 3, 1, 4}), r({1, 2, 3, 4}), r({4, 3, 2, 1})});
}

// every home unanimous for every child, only top choices efficient
inline Problem inefficient_market() {
  return Problem(labelled(3, 3), {r({1, 2, 3}), r({2, 1, 3}), r({3, 2, 1})},
                 {r({3, 2, 1}), r({3, 1, 2}), r({1, 2, 3})});
}

// two children, identical reports, two unanimous matchings
inline Problem truncation_market() {
  return Problem(labelled(2, 3), {r({1, 2, 3}), r({1, 2, 3})}, {r({3, 1, 2}), r({3, 1, 2})});
}

}  // namespace unanimity::testing
