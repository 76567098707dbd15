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

// The adjacent-pair stopping rule.
//
// With threshold r the rule looks at stop positions j = r, r+1, ..., n (1-based)
// and stops at the first j where x[j-1] and x[j] are adjacent with regard to
// the ranks seen so far, {x[1], ..., x[j]}. The stop succeeds when the two
// selected ranks differ by exactly 1 in the full ranking.
//
// classify_lambda() is an independent, literal evaluation of the
// "first stop at pair (k, k+1), pair adjacent in the full set" event. A
// permutation that succeeds already at j = r belongs to no such class; those
// are flagged with `at_edge` on the StopOutcome.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "stoprule/core.hpp"

namespace stoprule {

/// A validated (n, r) pair with n > 3 and 3 <= r <= n-1.
class Threshold {
 public:
  /// Throws DomainError when (n, r) is outside the valid window.
  Threshold(int n, int r);

  int n() const { return n_; }
  int r() const { return r_; }

  friend bool operator==(const Threshold&, const Threshold&) = default;

 private:
  int n_;
  int r_;
};

/// r = floor(alpha * n). Products within 1e-9 (relative) of an integer are
/// snapped to it first, so 0.29 * 100 gives 29 rather than 28. No clamping:
/// an r outside [3, n-1] is a DomainError naming the valid alpha window.
Threshold threshold_from_alpha(int n, double alpha);

enum class Outcome : std::uint8_t {
  SuccessAdjacent = 0,  ///< selected ranks differ by 1
  FailWraparound = 1,   ///< selected ranks are {1, n}
  FailPrefixOnly = 2,   ///< adjacent among the seen ranks only
  FailNoStop = 3,       ///< the rule never stopped
};
inline constexpr std::size_t kOutcomeCount = 4;

std::string_view to_string(Outcome o);

struct StopOutcome {
  std::optional<int> stop_position;  ///< j*, 1-based
  std::optional<std::pair<Rank, Rank>> selected_pair;  ///< (x[j*-1], x[j*])
  Outcome classification = Outcome::FailNoStop;
  bool at_edge = false;  ///< j* == r

  bool success() const { return classification == Outcome::SuccessAdjacent; }
};

struct LambdaClass {
  std::optional<int> k;
  bool in_pi = false;
};

StopOutcome run_rule(const Permutation& x, const Threshold& t);

/// Same as run_rule, reusing a caller-owned PrefixState sized for n.
StopOutcome run_rule(const Permutation& x, const Threshold& t, PrefixState& scratch);

LambdaClass classify_lambda(const Permutation& x, const Threshold& t);

/// Applies v -> 1 + ((v - 1 + i) mod n) to every rank. Requires 0 <= i < n.
Permutation sigma_shift(const Permutation& x, int i);

namespace detail {

/// classify_lambda over raw items (length n, 0-based storage).
LambdaClass classify_lambda_items(std::span<const Rank> x, int n, int r);

inline Outcome classify_pair(int n, Rank a, Rank b) {
  const int d = a > b ? a - b : b - a;
  if (d == 1) return Outcome::SuccessAdjacent;
  if (d == n - 1) return Outcome::FailWraparound;
  return Outcome::FailPrefixOnly;
}

/// Runs the rule over a stream of ranks. `next()` yields x[1], x[2], ... on
/// successive calls and is invoked only as far as the stop position. `state`
/// must be empty and sized for n.
template <class NextRank>
StopOutcome scan(int n, int r, PrefixState& state, NextRank&& next) {
  Rank prev = 0;
  for (int j = 1; j < r; ++j) {
    prev = next();
    state.insert_unchecked(prev);
  }
  for (int j = r; j <= n; ++j) {
    const Rank cur = next();
    state.insert_unchecked(cur);
    if (state.adjacent_unchecked(prev, cur)) {
      StopOutcome out;
      out.stop_position = j;
      out.selected_pair = std::make_pair(prev, cur);
      out.classification = classify_pair(n, prev, cur);
      out.at_edge = j == r;
      return out;
    }
    prev = cur;
  }
  return StopOutcome{};
}

}  // namespace detail
}  // namespace stoprule
