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

#include "stoprule/exact.hpp"

#include <vector>

#include "stoprule/error.hpp"

namespace stoprule {

using detail::ensure;
using detail::require;

namespace {

void require_rk(int n, int r, int k) {
  require(n > 3, "n must exceed 3, got " + std::to_string(n));
  require(r >= 3 && r <= k && k <= n - 1,
          "need 3 <= r <= k <= n-1, got n=" + std::to_string(n) + " r=" + std::to_string(r) +
              " k=" + std::to_string(k));
}

void require_r(int n, int r) {
  require(n > 3, "n must exceed 3, got " + std::to_string(n));
  require(r >= 3 && r <= n - 1,
          "need 3 <= r <= n-1, got n=" + std::to_string(n) + " r=" + std::to_string(r));
}

// Product lo * (lo+1) * ... * hi by binary splitting.
ExactCount range_product(long lo, long hi) {
  if (lo > hi) return 1;
  if (hi - lo < 16) {
    ExactCount p = 1;
    for (long i = lo; i <= hi; ++i) p *= i;
    return p;
  }
  const long mid = lo + (hi - lo) / 2;
  return range_product(lo, mid) * range_product(mid + 1, hi);
}

ExactRatio ratio(long num, long den) { return ExactRatio(ExactCount(num), ExactCount(den)); }

}  // namespace

ExactCount factorial(int n) {
  require(n >= 0, "factorial of a negative number");
  return range_product(2, n);
}

ExactCount count_lambda_rkzz(int n, int r, int k) {
  require_rk(n, r, k);
  const ExactCount num = factorial(n - 2) * (r - 2) * (r - 3);
  const ExactCount den = ExactCount(k - 1) * (k - 2);
  ensure(num % den == 0, "count_lambda_rkzz: inexact division");
  return num / den;
}

ExactCount count_lambda_rk(int n, int r, int k) {
  return ExactCount(2 * n) * count_lambda_rkzz(n, r, k);
}

ExactRatio telescoping_sum(int r, int n) {
  require_r(n, r);
  ExactRatio direct = 0;
  for (long k = r; k <= n - 1; ++k) direct += ratio(1, (k - 1) * (k - 2));
  const ExactRatio closed = ratio(1, r - 2) - ratio(1, n - 2);
  ensure(direct == closed, "telescoping_sum: direct sum differs from closed form");
  return closed;
}

ExactRatio lambda_ratio(int n, int r) {
  require_r(n, r);
  const long nl = n;
  const long rl = r;
  return ratio(2 * (rl - 3), nl - 1) - ratio(2 * (rl - 2) * (rl - 3), (nl - 1) * (nl - 2));
}

ExactCount lambda_count(int n, int r) {
  const ExactRatio c = ExactRatio(factorial(n)) * lambda_ratio(n, r);
  ensure(denominator(c) == 1, "lambda_count: n! * ratio is not an integer");
  return numerator(c);
}

void check_lambda_consistency(int n, int r) {
  require_r(n, r);
  ExactCount sum = 0;
  for (int k = r; k <= n - 1; ++k) sum += count_lambda_rk(n, r, k);
  ensure(sum == lambda_count(n, r),
         "sum over k of |Lambda(r,k)| differs from n! * lambda_ratio for n=" +
             std::to_string(n) + " r=" + std::to_string(r));
  const long rl = r;
  const ExactRatio via_sum = ratio(2 * (rl - 2) * (rl - 3), n - 1) * telescoping_sum(r, n);
  ensure(via_sum == lambda_ratio(n, r), "telescoped derivation differs from lambda_ratio");
}

ExactCount pi_count(int n, int r) {
  const ExactCount total = lambda_count(n, r);
  ensure(total % n == 0, "pi_count: |Lambda| not divisible by n");
  return total / n;
}

ExactRatio success_probability_exact(int n, int r) {
  return (ExactRatio(1) - ratio(1, n)) * lambda_ratio(n, r);
}

double asymptotic_success(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  return 2.0 * alpha - 2.0 * alpha * alpha;
}

OptimalThreshold optimal_threshold(int n) {
  require(n > 4, "optimal_threshold needs n > 4, got " + std::to_string(n));
  OptimalThreshold best{3, success_probability_exact(n, 3)};
  for (int r = 4; r <= n - 1; ++r) {
    ExactRatio p = success_probability_exact(n, r);
    if (p > best.p_star) best = {r, std::move(p)};
  }
  return best;
}

std::string to_string(const ExactRatio& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const ExactRatio& q) { return q.convert_to<double>(); }

}  // namespace stoprule
