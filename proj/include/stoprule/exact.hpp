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

// Closed-form counts and probabilities for the stopping rule, in exact
// big-integer / rational arithmetic.
//
// Notation used in the comments below:
//   Lambda(r, k)  permutations whose first stop after the threshold is at the
//                 pair (k, k+1) and that pair is adjacent in 1..n,
//   Lambda(r)     the disjoint union over k = r..n-1,
//   Pi(r)         the members of Lambda(r) whose selected pair is {1, n}.

#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace stoprule {

using ExactCount = boost::multiprecision::cpp_int;
using ExactRatio = boost::multiprecision::cpp_rational;

ExactCount factorial(int n);

/// |Lambda(r, k)| restricted to one fixed ordered pair (x[k], x[k+1]) = (z, z')
/// adjacent in 1..n:  (n-2)! (r-2)(r-3) / ((k-1)(k-2)).
/// The value is the same for each of the 2n such pairs, so no pair is taken.
ExactCount count_lambda_rkzz(int n, int r, int k);

/// |Lambda(r, k)| = 2n * count_lambda_rkzz(n, r, k).
ExactCount count_lambda_rk(int n, int r, int k);

/// sum_{k=r}^{n-1} 1/((k-1)(k-2)), computed term by term and checked against
/// the telescoped value 1/(r-2) - 1/(n-2).
ExactRatio telescoping_sum(int r, int n);

/// |Lambda(r)| / n! = 2(r-3)/(n-1) - 2(r-2)(r-3)/((n-1)(n-2)).
ExactRatio lambda_ratio(int n, int r);

/// |Lambda(r)| = n! * lambda_ratio(n, r).
ExactCount lambda_count(int n, int r);

/// Cross-checks the closed form against the per-k counts:
/// sum_k count_lambda_rk(n, r, k) == n! * lambda_ratio(n, r), and
/// lambda_ratio == 2(r-2)(r-3)/(n-1) * telescoping_sum(r, n).
/// Throws InternalError on mismatch. Cost grows with n! so this is kept out
/// of lambda_ratio itself.
void check_lambda_consistency(int n, int r);

/// |Pi(r)| = |Lambda(r)| / n, asserted to divide exactly.
ExactCount pi_count(int n, int r);

/// |Lambda(r) \ Pi(r)| / n! = (1 - 1/n) * lambda_ratio(n, r).
ExactRatio success_probability_exact(int n, int r);

/// Limit of the success probability for r = floor(alpha n): 2 alpha - 2 alpha^2.
double asymptotic_success(double alpha);

struct OptimalThreshold {
  int r_star;
  ExactRatio p_star;
};

/// Exhaustive scan of r in [3, n-1]; smallest maximizer on ties. Requires n > 4.
OptimalThreshold optimal_threshold(int n);

/// "p/q" (or "p" when q == 1).
std::string to_string(const ExactRatio& q);
double to_double(const ExactRatio& q);

}  // namespace stoprule
