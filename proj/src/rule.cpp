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

#include "stoprule/rule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "stoprule/error.hpp"

namespace stoprule {

using detail::require;

Threshold::Threshold(int n, int r) : n_(n), r_(r) {
  require(n > 3, "n must exceed 3, got " + std::to_string(n));
  require(r >= 3 && r <= n - 1, "threshold r=" + std::to_string(r) + " outside [3, " +
                                    std::to_string(n - 1) + "] for n=" + std::to_string(n));
}

Threshold threshold_from_alpha(int n, double alpha) {
  require(n > 3, "n must exceed 3, got " + std::to_string(n));
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  double scaled = alpha * static_cast<double>(n);
  const double nearest = std::round(scaled);
  if (std::abs(scaled - nearest) <= 1e-9 * std::max(1.0, nearest)) scaled = nearest;
  const auto r = static_cast<long long>(std::floor(scaled));
  if (r < 3 || r > n - 1) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "alpha=" << alpha << " gives threshold r=" << r << " for n=" << n
        << "; need 3 <= r <= " << (n - 1) << ", i.e. alpha in [" << 3.0 / n << ", 1)";
    throw DomainError(msg.str());
  }
  return Threshold(n, static_cast<int>(r));
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::SuccessAdjacent: return "success_adjacent";
    case Outcome::FailWraparound: return "fail_wraparound";
    case Outcome::FailPrefixOnly: return "fail_prefix_only";
    case Outcome::FailNoStop: return "fail_no_stop";
  }
  return "unknown";
}

StopOutcome run_rule(const Permutation& x, const Threshold& t) {
  PrefixState state(t.n());
  return run_rule(x, t, state);
}

StopOutcome run_rule(const Permutation& x, const Threshold& t, PrefixState& scratch) {
  require(x.size() == t.n(), "permutation length does not match threshold n");
  require(scratch.universe_size() == t.n(), "scratch prefix sized for a different n");
  scratch.clear();
  std::size_t pos = 0;
  return detail::scan(t.n(), t.r(), scratch, [&] { return x[pos++]; });
}

namespace {

// Relative-rank difference of positions a and b within x[0..len), by counting.
int prefix_rank_diff(std::span<const Rank> x, int len, std::size_t a, std::size_t b) {
  int ra = 0;
  int rb = 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(len); ++i) {
    if (x[i] <= x[a]) ++ra;
    if (x[i] <= x[b]) ++rb;
  }
  return ra - rb;
}

}  // namespace

LambdaClass detail::classify_lambda_items(std::span<const Rank> x, int n, int r) {
  for (int k = r; k <= n - 1; ++k) {
    // i = k: is {x[k-1], x[k]} adjacent within {x[1..k]}?
    const int diff = prefix_rank_diff(x, k, static_cast<std::size_t>(k - 2),
                                      static_cast<std::size_t>(k - 1));
    if (diff == 1 || diff == -1 || diff == k - 1 || diff == 1 - k) return {};
    const Rank a = x[static_cast<std::size_t>(k - 1)];
    const Rank b = x[static_cast<std::size_t>(k)];
    const int global = a - b;
    if (global == 1 || global == -1) return {k, false};
    if (global == n - 1 || global == 1 - n) return {k, true};
  }
  return {};
}

LambdaClass classify_lambda(const Permutation& x, const Threshold& t) {
  require(x.size() == t.n(), "permutation length does not match threshold n");
  return detail::classify_lambda_items(x.items(), t.n(), t.r());
}

Permutation sigma_shift(const Permutation& x, int i) {
  const int n = x.size();
  require(i >= 0 && i < std::max(n, 1), "shift must lie in [0, n)");
  std::vector<Rank> out(static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = 1 + (x[p] - 1 + i) % n;
  return Permutation(std::move(out));
}

}  // namespace stoprule
