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

// Ground-truth engines: exhaustive enumeration of all n! interview orders,
// seeded Monte Carlo estimation, and the succession-free permutation count.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stoprule/exact.hpp"
#include "stoprule/rule.hpp"

namespace stoprule {

inline constexpr int kMaxEnumerateN = 11;
inline constexpr int kMaxEnumerateForcedN = 14;
inline constexpr int kMaxA002464N = 13;
inline constexpr int kMaxA002464ForcedN = 18;

struct EnumerationOptions {
  int workers = 1;
  bool force = false;  ///< lifts the n <= kMaxEnumerateN guard
};

/// Tallies over every permutation of 1..n for one threshold r.
///
/// The categories partition n!:
///   sum(per_k_lambda) + edge_success + edge_wrap + prefix_only_fail + no_stop.
/// per_k_lambda counts include the wraparound (Pi) members.
struct EnumerationReport {
  int n = 0;
  int r = 0;
  std::map<int, ExactCount> per_k_lambda;
  ExactCount pi_count;
  ExactCount edge_success;  ///< succeeded at the first checked position, j* == r
  ExactCount edge_wrap;     ///< stopped on {1, n} at j* == r
  ExactCount prefix_only_fail;
  ExactCount no_stop;
  ExactCount rule_success;  ///< all SuccessAdjacent stops, edge included
  ExactCount total;
  /// Permutations where classify_lambda and run_rule disagree. Always 0.
  ExactCount equivalence_mismatches;

  ExactCount lambda_total() const;
};

EnumerationReport enumerate_counts(int n, int r, const EnumerationOptions& opts = {});

/// Permutations of 1..n with no two consecutive entries differing by 1
/// (OEIS A002464). Exact, via a subset/last-element dynamic program.
/// Requires 1 <= n <= kMaxA002464N unless `force` (then up to kMaxA002464ForcedN).
ExactCount a002464_count(int n, bool force = false);

struct VerificationCheck {
  std::string quantity;
  std::string enumerated;
  std::string expected;
  bool match = false;
};

struct VerificationReport {
  int n = 0;
  int r = 0;
  std::vector<VerificationCheck> checks;
  ExactRatio edge_fraction;  ///< |E| / n!

  bool ok() const;
  /// Name of the first failing quantity, if any.
  std::optional<std::string> first_mismatch() const;
};

/// Enumerates (n, r) and compares every tally with the closed forms.
VerificationReport verify_against_exact(int n, int r, const EnumerationOptions& opts = {});

struct EstimateResult {
  int n = 0;
  int r = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double p_hat = 0.0;
  double stderr_ = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::array<std::uint64_t, kOutcomeCount> tallies{};       ///< indexed by Outcome
  std::array<std::uint64_t, kOutcomeCount> edge_tallies{};  ///< subset with at_edge

  std::uint64_t tally(Outcome o) const { return tallies[static_cast<std::size_t>(o)]; }
  std::uint64_t edge_tally(Outcome o) const { return edge_tallies[static_cast<std::size_t>(o)]; }
};

/// Monte Carlo estimate of the rule's success probability. Trial t uses the
/// Philox stream (seed, t), so tallies do not depend on `workers`.
EstimateResult estimate(int n, int r, std::uint64_t trials, std::uint64_t seed, int workers = 1);

/// Simulates one trial: draws the interview order lazily with a partial
/// Fisher-Yates shuffle, only as far as the rule reads it.
StopOutcome simulate_trial(int n, int r, std::uint64_t seed, std::uint64_t trial);

struct SweepRow {
  double alpha = 0.0;
  std::optional<EstimateResult> result;
  std::string error;  ///< set when alpha gives no valid threshold
};

std::vector<SweepRow> sweep(int n, const std::vector<double>& alphas, std::uint64_t trials,
                            std::uint64_t seed, int workers = 1);

/// Parses "start:end:step" (inclusive end) or a comma list into alphas.
std::vector<double> parse_alpha_range(const std::string& text);

}  // namespace stoprule
