#pragma once

#include <cstdint>
#include <vector>

namespace unanimity::detail {

// Augmenting-path bipartite matcher over left nodes that each list allowed
// right nodes. Left nodes are appended one at a time.
class Kuhn {
 public:
  static constexpr std::int32_t kFree = -1;

  explicit Kuhn(std::size_t right_count) : right_(right_count, kFree) {}

  std::size_t push_left(std::vector<std::uint32_t> allowed) {
    allowed_.push_back(std::move(allowed));
    left_.push_back(kFree);
    return left_.size() - 1;
  }

  // Only valid for the most recently pushed node while it is unmatched.
  void pop_left() {
    allowed_.pop_back();
    left_.pop_back();
  }

  // Tries to match `l` without unmatching anyone; state is untouched on failure.
  bool augment(std::size_t l) {
    seen_.assign(right_.size(), 0);
    return dfs(l);
  }

  std::size_t left_count() const { return left_.size(); }
  std::int32_t left_match(std::size_t l) const { return left_[l]; }
  std::int32_t right_match(std::size_t r) const { return right_[r]; }
  const std::vector<std::uint32_t>& allowed(std::size_t l) const { return allowed_[l]; }

  // Right nodes left unmatched by at least one matching that saturates every
  // left node. Requires the current matching to saturate the left side.
  std::vector<bool> freeable() const {
    std::vector<bool> out(right_.size(), false);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t r = 0; r < right_.size(); ++r) {
      if (right_[r] == kFree) {
        out[r] = true;
        queue.push_back(r);
      }
    }
    // a matched right node is freeable when its holder can move to a freeable node
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const auto x = queue[i];
      for (std::size_t l = 0; l < left_.size(); ++l) {
        const auto held = left_[l];
        if (held == kFree || static_cast<std::uint32_t>(held) == x || out[held]) continue;
        for (auto r : allowed_[l]) {
          if (r == x) {
            out[held] = true;
            queue.push_back(static_cast<std::uint32_t>(held));
            break;
          }
        }
      }
    }
    return out;
  }

 private:
  bool dfs(std::size_t l) {
    for (auto r : allowed_[l]) {
      if (seen_[r]) continue;
      seen_[r] = 1;
      if (right_[r] == kFree || dfs(static_cast<std::size_t>(right_[r]))) {
        right_[r] = static_cast<std::int32_t>(l);
        left_[l] = static_cast<std::int32_t>(r);
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::uint32_t>> allowed_;
  std::vector<std::int32_t> left_;
  std::vector<std::int32_t> right_;
  std::vector<std::uint8_t> seen_;
};

}  // namespace unanimity::detail
