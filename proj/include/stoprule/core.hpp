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

// Ranks, relative ranks and the cyclic adjacency relation on a set of ranks.
//
// Applicants are identified with their global rank 1..n. Two members x, y of a
// set P are adjacent with regard to P when their relative ranks differ by
// 1 or by |P|-1, i.e. they are neighbours on the circle obtained by sorting P
// and joining max(P) back to min(P).

#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace stoprule {

using Rank = std::int32_t;

/// An interview order: a sequence holding each of 1..n exactly once.
class Permutation {
 public:
  /// Throws DomainError unless `items` is a permutation of 1..items.size().
  explicit Permutation(std::vector<Rank> items);
  Permutation(std::initializer_list<Rank> items)
      : Permutation(std::vector<Rank>(items)) {}

  static Permutation identity(int n);

  int size() const { return static_cast<int>(items_.size()); }
  /// 0-based element access.
  Rank operator[](std::size_t i) const { return items_[i]; }
  /// 1-based position access, matching interview positions.
  Rank at_position(int j) const { return items_.at(static_cast<std::size_t>(j - 1)); }
  std::span<const Rank> items() const { return items_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Rank> items_;
};

/// A finite set of ranks with order queries. Backed by a sorted vector; this is
/// the straightforward reference structure, see PrefixState for the fast one.
class RankSet {
 public:
  RankSet() = default;
  /// Throws DomainError on duplicate or non-positive members.
  explicit RankSet(std::vector<Rank> members);
  RankSet(std::initializer_list<Rank> members) : RankSet(std::vector<Rank>(members)) {}

  static RankSet range(Rank lo, Rank hi);

  int size() const { return static_cast<int>(sorted_.size()); }
  bool contains(Rank x) const;
  Rank min() const;
  Rank max() const;
  std::optional<Rank> predecessor(Rank x) const;
  std::optional<Rank> successor(Rank x) const;
  /// Number of members <= x; x need not be a member.
  int count_le(Rank x) const;
  std::span<const Rank> sorted() const { return sorted_; }

 private:
  std::vector<Rank> sorted_;
};

/// rr(P, x) = |{z in P : z <= x}|. Throws DomainError if x is not in P.
int relative_rank(const RankSet& P, Rank x);

/// The admissible relative-rank differences {-1, 1, k-1, 1-k} for a set of
/// size k, in that order. Throws DomainError for k < 3.
std::vector<int> delta_set(int k);

/// True iff rr(P,x) - rr(P,y) lies in delta_set(|P|). Evaluated literally from
/// relative ranks; requires x != y, both in P and |P| >= 3.
bool is_adjacent(const RankSet& P, Rank x, Rank y);

/// Number of members of P adjacent to x. Equals 2 whenever |P| >= 3.
int adjacent_count(const RankSet& P, Rank x);

/// Incremental order-statistics index over ranks drawn from 1..n.
///
/// Stored as a hierarchy of 64-bit occupancy words (each level summarizes
/// which words of the level below are non-empty), so insertion and
/// predecessor/successor lookups touch O(log_64 n) words. Minimum and
/// maximum are tracked directly since ranks are never removed.
class PrefixState {
 public:
  explicit PrefixState(int universe_size);

  int universe_size() const { return universe_; }
  int size() const { return size_; }
  bool contains(Rank v) const;

  /// Throws DomainError if v is out of range or already present.
  void insert(Rank v);

  /// Largest member strictly below v / smallest member strictly above v.
  std::optional<Rank> predecessor(Rank v) const;
  std::optional<Rank> successor(Rank v) const;
  /// Cyclic neighbours: predecessor (successor) with wraparound to max (min).
  Rank cyclic_predecessor(Rank v) const;
  Rank cyclic_successor(Rank v) const;

  Rank min() const;
  Rank max() const;

  /// Number of members <= v. Scans occupancy words, O(n / 64).
  int count_le(Rank v) const;

  /// Empties the index, keeping the allocation.
  void clear();

  /// Unchecked insert for hot loops; v must be in range and absent.
  void insert_unchecked(Rank v) {
    auto idx = static_cast<std::uint32_t>(v - 1);
    for (auto& level : levels_) {
      std::uint64_t& word = level[idx >> 6];
      const bool was_empty = word == 0;
      word |= std::uint64_t{1} << (idx & 63);
      if (!was_empty) break;
      idx >>= 6;
    }
    if (size_ == 0 || v < min_) min_ = v;
    if (size_ == 0 || v > max_) max_ = v;
    ++size_;
  }

  /// Adjacency of an existing member `prev` and the most recently inserted
  /// `last` with regard to the current contents. Unchecked.
  bool adjacent_unchecked(Rank prev, Rank last) const {
    return prev == cyclic_predecessor(last) || prev == cyclic_successor(last);
  }

 private:
  std::int64_t next_set(std::int64_t idx) const;
  std::int64_t prev_set(std::int64_t idx) const;

  int universe_;
  int size_ = 0;
  Rank min_ = 0;
  Rank max_ = 0;
  std::vector<std::vector<std::uint64_t>> levels_;
};

/// Inserts `next` into `state`, then reports whether `prev` and `next` are
/// adjacent with regard to the enlarged set. `prev` must already be present
/// and the enlarged set must have at least 3 members.
bool prefix_pair_adjacent(PrefixState& state, Rank prev, Rank next);

/// True iff two ranks of 1..n are adjacent in the full set: they differ by 1,
/// or they are {1, n}.
inline bool globally_adjacent(int n, Rank a, Rank b) {
  const int d = a > b ? a - b : b - a;
  return d == 1 || d == n - 1;
}

}  // namespace stoprule
