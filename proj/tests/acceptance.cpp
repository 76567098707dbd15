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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "stoprule/core.hpp"
#include "stoprule/exact.hpp"
#include "stoprule/experiments.hpp"
#include "stoprule/rule.hpp"

using namespace stoprule;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::ostringstream&)> check;
};

// Enumeration results for n in {5,...,8}, all r, computed once.
std::map<std::pair<int, int>, EnumerationReport> g_enum;
double g_enum_seconds = 0.0;

void run_enumerations() {
  const auto t0 = Clock::now();
  for (int n = 5; n <= 8; ++n) {
    for (int r = 3; r <= n - 1; ++r) g_enum.emplace(std::make_pair(n, r), enumerate_counts(n, r, {workers(), false}));
  }
  g_enum_seconds = seconds_since(t0);
}

bool exact_counts(std::ostringstream& msg) {
  run_enumerations();
  bool ok = true;
  int compared = 0;
  for (const auto& [key, e] : g_enum) {
    const auto [n, r] = key;
    for (int k = r; k <= n - 1; ++k) {
      // 2n (n-2)! (r-2)(r-3) / ((k-1)(k-2)), evaluated here from scratch.
      const ExactRatio formula = ExactRatio(ExactCount(2 * n) * factorial(n - 2) * (r - 2) * (r - 3),
                                            ExactCount((k - 1) * (k - 2)));
      ok = ok && ExactRatio(e.per_k_lambda.at(k)) == formula &&
           e.per_k_lambda.at(k) == count_lambda_rk(n, r, k);
      ++compared;
    }
  }
  const auto spot = g_enum.at({7, 4}).per_k_lambda.at(5);
  ok = ok && spot == 280 && g_enum_seconds < 60.0;
  msg << compared << " (n,r,k) triples; n=7 r=4 k=5 -> " << spot << "; enumeration "
      << g_enum_seconds << " s (limit 60 s)";
  return ok;
}

bool pi_ratio(std::ostringstream& msg) {
  bool ok = true;
  for (const auto& [key, e] : g_enum) {
    const int n = key.first;
    const ExactCount lambda = e.lambda_total();
    ok = ok && e.pi_count * n == lambda && e.pi_count == pi_count(n, key.second);
  }
  const auto& e74 = g_enum.at({7, 4});
  msg << "n=7 r=4: " << e74.pi_count << " of " << e74.lambda_total();
  return ok && e74.pi_count == 144 && e74.lambda_total() == 1008;
}

bool closed_form_ratio(std::ostringstream& msg) {
  bool ok = true;
  for (const auto& [key, e] : g_enum) {
    const auto [n, r] = key;
    const ExactRatio enumerated(e.lambda_total(), factorial(n));
    const ExactRatio formula = ExactRatio(2 * (r - 3), n - 1) -
                               ExactRatio(2 * (r - 2) * (r - 3), (n - 1) * (n - 2));
    ok = ok && enumerated == formula && formula == lambda_ratio(n, r);
  }
  const auto& e64 = g_enum.at({6, 4});
  const ExactRatio spot(e64.lambda_total(), factorial(6));
  msg << "n=6 r=4 -> " << to_string(spot);
  return ok && spot == ExactRatio(1, 5);
}

bool reconciliation(std::ostringstream& msg) {
  bool ok = true;
  ExactRatio worst_edge = 0;
  for (const auto& [key, e] : g_enum) {
    const auto [n, r] = key;
    const ExactCount lambda_minus_pi = e.lambda_total() - e.pi_count;
    const ExactRatio edge(e.edge_success, factorial(n));
    ok = ok && e.rule_success == lambda_minus_pi + e.edge_success;
    ok = ok && edge <= ExactRatio(2, n);
    ok = ok && e.equivalence_mismatches == 0;
    if (edge * n > worst_edge) worst_edge = edge * n;
  }
  msg << "rule success = |Lambda\\Pi| + |E| on all (n,r); max n*|E|/n! = " << to_string(worst_edge)
      << " (limit 2)";
  return ok;
}

bool asymptotic_optimum(std::ostringstream& msg) {
  const auto t0 = Clock::now();
  const auto rows = sweep(10000, parse_alpha_range("0.1:0.9:0.1"), 100000, 20210629, workers());
  const double secs = seconds_since(t0);
  double best = -1.0;
  double best_alpha = 0.0;
  double at_half = -1.0;
  bool ok = rows.size() == 9;
  for (const auto& row : rows) {
    if (!row.result) return false;
    if (row.result->p_hat > best) {
      best = row.result->p_hat;
      best_alpha = row.alpha;
    }
    if (std::abs(row.alpha - 0.5) < 1e-12) at_half = row.result->p_hat;
  }
  ok = ok && std::abs(best_alpha - 0.5) < 1e-12 && std::abs(at_half - 0.5) <= 0.01 && secs < 120.0;
  msg << "argmax alpha=" << best_alpha << ", p_hat(0.5)=" << at_half << " (|.-0.5| <= 0.01); "
      << secs << " s (limit 120 s)";
  return ok;
}

bool monte_carlo_vs_exact(std::ostringstream& msg) {
  const int n = 1000;
  const auto e = estimate(n, 500, 1000000, 42, workers());
  const double p = to_double(success_probability_exact(n, 500));
  const double lo = p - 4 * e.stderr_;
  const double hi = p + 2.0 / n + 4 * e.stderr_;
  msg << "p_hat=" << e.p_hat << " in [" << lo << ", " << hi << "], P=" << p;
  return e.p_hat >= lo && e.p_hat <= hi;
}

bool argmax_convergence(std::ostringstream& msg) {
  bool ok = true;
  for (int n : {50, 100, 500, 1000}) {
    const auto best = optimal_threshold(n);
    const double gap = std::abs(static_cast<double>(best.r_star) / n - 0.5);
    ok = ok && gap <= 2.0 / n;
    msg << "n=" << n << " r*=" << best.r_star << "; ";
  }
  return ok;
}

bool two_neighbours(std::ostringstream& msg) {
  std::mt19937_64 gen(314159);
  const int samples = 10000;
  int failures = 0;
  for (int s = 0; s < samples; ++s) {
    const int universe = 3 + static_cast<int>(gen() % 200);
    const int size = 3 + static_cast<int>(gen() % static_cast<std::uint64_t>(universe - 2));
    std::vector<Rank> all(static_cast<std::size_t>(universe));
    for (int i = 0; i < universe; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(all.begin(), all.end(), gen);
    all.resize(static_cast<std::size_t>(size));
    const RankSet P(all);
    const Rank x = all[gen() % all.size()];
    if (adjacent_count(P, x) != 2) ++failures;
  }
  msg << samples << " random (P, x) with |P| >= 3; " << failures << " failures";
  return failures == 0;
}

bool orbit_invariants(std::ostringstream& msg) {
  long orbits_checked = 0;
  for (int n : {6, 7}) {
    for (int r = 3; r <= n - 1; ++r) {
      const Threshold t(n, r);
      std::vector<Rank> items(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) items[static_cast<std::size_t>(i)] = i + 1;
      do {
        const Permutation x(items);
        const auto c = classify_lambda(x, t);
        if (!c.k) continue;
        int pi_members = 0;
        for (int i = 0; i < n; ++i) {
          const auto ci = classify_lambda(sigma_shift(x, i), t);
          if (ci.k != c.k) {
            msg << "orbit leaves Lambda(" << r << "," << *c.k << ") at n=" << n;
            return false;
          }
          pi_members += ci.in_pi;
        }
        if (pi_members != 1) {
          msg << "orbit with " << pi_members << " Pi members at n=" << n;
          return false;
        }
        ++orbits_checked;
      } while (std::next_permutation(items.begin(), items.end()));
    }
  }
  msg << orbits_checked << " Lambda members' orbits checked (n in {6,7})";
  return true;
}

bool a002464(std::ostringstream& msg) {
  const ExactCount a4 = a002464_count(4);
  const ExactCount a5 = a002464_count(5);
  const ExactCount a12 = a002464_count(12);
  const double frac = to_double(ExactRatio(a12, factorial(12)));
  const double gap = std::abs(frac - std::exp(-2.0));
  msg << "a(4)=" << a4 << " a(5)=" << a5 << " a(12)/12!=" << frac << " |.-e^-2|=" << gap
      << " (limit 0.02)";
  return a4 == 2 && a5 == 14 && gap <= 0.02;
}

bool determinism(std::ostringstream& msg) {
  const auto a = estimate(1000, 400, 200000, 7, 1);
  const auto b = estimate(1000, 400, 200000, 7, 8);
  msg << "success tallies " << a.tally(Outcome::SuccessAdjacent) << " vs "
      << b.tally(Outcome::SuccessAdjacent);
  return a.tallies == b.tallies && a.edge_tallies == b.edge_tallies;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact-count reproduction", exact_counts},
      {2, "Pi ratio 1/n", pi_ratio},
      {3, "Lambda ratio closed form", closed_form_ratio},
      {4, "rule / Lambda reconciliation", reconciliation},
      {5, "asymptotic optimum at alpha=1/2", asymptotic_optimum},
      {6, "Monte Carlo vs exact (n=1000, r=500)", monte_carlo_vs_exact},
      {7, "argmax convergence", argmax_convergence},
      {8, "every rank has two prefix neighbours", two_neighbours},
      {9, "sigma orbit invariants", orbit_invariants},
      {10, "A002464 values and e^-2 limit", a002464},
      {11, "worker-count determinism", determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    std::ostringstream msg;
    msg.precision(6);
    const auto t0 = Clock::now();
    bool ok = false;
    try {
      ok = c.check(msg);
    } catch (const std::exception& e) {
      msg << "exception: " << e.what();
    }
    std::printf("%s  %2d  %-38s %s [%.2f s]\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                msg.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
