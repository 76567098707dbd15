// Copyright 2026 The stoprule Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stoprule/core.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "stoprule/error.hpp"

namespace stoprule {

using detail::require;

Permutation::Permutation(std::vector<Rank> items) : items_(std::move(items)) {
  const auto n = items_.size();
  std::vector<bool> seen(n + 1, false);
  for (Rank v : items_) {
    require(v >= 1 && static_cast<std::size_t>(v) <= n,
            "permutation entry " + std::to_string(v) + " outside 1.." + std::to_string(n));
    require(!seen[static_cast<std::size_t>(v)],
            "permutation entry " + std::to_string(v) + " repeated");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  require(n >= 0, "negative permutation length");
  std::vector<Rank> items(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) items[static_cast<std::size_t>(i)] = i + 1;
  return Permutation(std::move(items));
}

RankSet::RankSet(std::vector<Rank> members) : sorted_(std::move(members)) {
  std::sort(sorted_.begin(), sorted_.end());
  require(std::adjacent_find(sorted_.begin(), sorted_.end()) == sorted_.end(),
          "rank set has duplicate members");
  require(sorted_.empty() || sorted_.front() >= 1, "ranks must be positive");
}

RankSet RankSet::range(Rank lo, Rank hi) {
  std::vector<Rank> v;
  for (Rank x = lo; x <= hi; ++x) v.push_back(x);
  return RankSet(std::move(v));
}

bool RankSet::contains(Rank x) const {
  return std::binary_search(sorted_.begin(), sorted_.end(), x);
}

Rank RankSet::min() const {
  require(!sorted_.empty(), "min of empty rank set");
  return sorted_.front();
}

Rank RankSet::max() const {
  require(!sorted_.empty(), "max of empty rank set");
  return sorted_.back();
}

std::optional<Rank> RankSet::predecessor(Rank x) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  if (it == sorted_.begin()) return std::nullopt;
  return *std::prev(it);
}

std::optional<Rank> RankSet::successor(Rank x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  if (it == sorted_.end()) return std::nullopt;
  return *it;
}

int RankSet::count_le(Rank x) const {
  return static_cast<int>(std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin());
}

int relative_rank(const RankSet& P, Rank x) {
  require(P.contains(x), "rank " + std::to_string(x) + " is not a member of the set");
  return P.count_le(x);
}

std::vector<int> delta_set(int k) {
  require(k >= 3, "delta_set needs k >= 3, got " + std::to_string(k));
  return {-1, 1, k - 1, 1 - k};
}

bool is_adjacent(const RankSet& P, Rank x, Rank y) {
  require(P.size() >= 3, "adjacency needs a set of at least 3 ranks");
  require(x != y, "adjacency needs two distinct ranks");
  const int diff = relative_rank(P, x) - relative_rank(P, y);
  const auto delta = delta_set(P.size());
  return std::find(delta.begin(), delta.end(), diff) != delta.end();
}

int adjacent_count(const RankSet& P, Rank x) {
  require(P.size() >= 3, "adjacent_count needs a set of at least 3 ranks");
  require(P.contains(x), "rank " + std::to_string(x) + " is not a member of the set");
  int count = 0;
  for (Rank y : P.sorted()) {
    if (y != x && is_adjacent(P, x, y)) ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// PrefixState

PrefixState::PrefixState(int universe_size) : universe_(universe_size) {
  require(universe_size >= 1, "PrefixState needs a positive universe size");
  std::size_t bits = static_cast<std::size_t>(universe_size);
  do {
    const std::size_t words = (bits + 63) / 64;
    levels_.emplace_back(words, 0);
    bits = words;
  } while (bits > 1);
}

bool PrefixState::contains(Rank v) const {
  if (v < 1 || v > universe_) return false;
  const auto idx = static_cast<std::uint32_t>(v - 1);
  return (levels_[0][idx >> 6] >> (idx & 63)) & 1U;
}

void PrefixState::insert(Rank v) {
  require(v >= 1 && v <= universe_,
          "rank " + std::to_string(v) + " outside 1.." + std::to_string(universe_));
  require(!contains(v), "rank " + std::to_string(v) + " inserted twice");
  insert_unchecked(v);
}

// Smallest set index >= idx at level 0, or -1.
std::int64_t PrefixState::next_set(std::int64_t idx) const {
  std::size_t level = 0;
  for (;; ++level) {
    if (level == levels_.size()) return -1;
    const auto& words = levels_[level];
    const auto w = static_cast<std::size_t>(idx >> 6);
    if (w >= words.size()) return -1;
    const std::uint64_t word = words[w] & (~std::uint64_t{0} << (idx & 63));
    if (word != 0) {
      idx = static_cast<std::int64_t>(w << 6) + std::countr_zero(word);
      break;
    }
    idx = static_cast<std::int64_t>(w) + 1;
  }
  while (level > 0) {
    --level;
    idx = (idx << 6) + std::countr_zero(levels_[level][static_cast<std::size_t>(idx)]);
  }
  return idx;
}

// Largest set index <= idx at level 0, or -1.
std::int64_t PrefixState::prev_set(std::int64_t idx) const {
  if (idx < 0) return -1;
  std::size_t level = 0;
  for (;; ++level) {
    if (level == levels_.size()) return -1;
    const auto& words = levels_[level];
    auto w = static_cast<std::size_t>(idx >> 6);
    std::uint64_t word;
    if (w >= words.size()) {
      w = words.size() - 1;
      word = words[w];
    } else {
      word = words[w] & (~std::uint64_t{0} >> (63 - (idx & 63)));
    }
    if (word != 0) {
      idx = static_cast<std::int64_t>(w << 6) + 63 - std::countl_zero(word);
      break;
    }
    if (w == 0) return -1;
    idx = static_cast<std::int64_t>(w) - 1;
  }
  while (level > 0) {
    --level;
    idx = (idx << 6) + 63 - std::countl_zero(levels_[level][static_cast<std::size_t>(idx)]);
  }
  return idx;
}

std::optional<Rank> PrefixState::predecessor(Rank v) const {
  const std::int64_t i = prev_set(static_cast<std::int64_t>(v) - 2);
  if (i < 0) return std::nullopt;
  return static_cast<Rank>(i + 1);
}

std::optional<Rank> PrefixState::successor(Rank v) const {
  if (v >= universe_) return std::nullopt;
  const std::int64_t i = next_set(static_cast<std::int64_t>(v));
  if (i < 0) return std::nullopt;
  return static_cast<Rank>(i + 1);
}

Rank PrefixState::cyclic_predecessor(Rank v) const {
  if (v <= min_) return max_;
  return static_cast<Rank>(prev_set(static_cast<std::int64_t>(v) - 2) + 1);
}

Rank PrefixState::cyclic_successor(Rank v) const {
  if (v >= max_) return min_;
  return static_cast<Rank>(next_set(static_cast<std::int64_t>(v)) + 1);
}

Rank PrefixState::min() const {
  require(size_ > 0, "min of empty prefix");
  return min_;
}

Rank PrefixState::max() const {
  require(size_ > 0, "max of empty prefix");
  return max_;
}

int PrefixState::count_le(Rank v) const {
  if (v < 1) return 0;
  if (v > universe_) v = universe_;
  const auto idx = static_cast<std::uint32_t>(v - 1);
  const auto& words = levels_[0];
  int count = 0;
  for (std::size_t w = 0; w < (idx >> 6); ++w) count += std::popcount(words[w]);
  count += std::popcount(words[idx >> 6] & (~std::uint64_t{0} >> (63 - (idx & 63))));
  return count;
}

void PrefixState::clear() {
  for (auto& level : levels_) std::fill(level.begin(), level.end(), 0);
  size_ = 0;
  min_ = 0;
  max_ = 0;
}

bool prefix_pair_adjacent(PrefixState& state, Rank prev, Rank next) {
  require(state.contains(prev), "previous rank " + std::to_string(prev) + " not in prefix");
  require(state.size() >= 2, "prefix must hold at least 2 ranks before the insert");
  state.insert(next);
  return state.adjacent_unchecked(prev, next);
}

}  // namespace stoprule
