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

#include "stoprule/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "stoprule/error.hpp"
#include "stoprule/philox.hpp"

namespace stoprule {

using detail::ensure;
using detail::require;

namespace {

// Runs fn(worker_index) on `workers` threads; the calling thread takes index 0.
template <class Fn>
void run_workers(int workers, Fn&& fn) {
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        fn(w);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  try {
    fn(0);
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct EnumTally {
  std::vector<std::uint64_t> per_k;  // indexed by k
  std::uint64_t pi = 0;
  std::uint64_t edge_success = 0;
  std::uint64_t edge_wrap = 0;
  std::uint64_t prefix_only = 0;
  std::uint64_t no_stop = 0;
  std::uint64_t rule_success = 0;
  std::uint64_t total = 0;
  std::uint64_t mismatches = 0;

  explicit EnumTally(int n) : per_k(static_cast<std::size_t>(n), 0) {}

  void merge(const EnumTally& o) {
    for (std::size_t k = 0; k < per_k.size(); ++k) per_k[k] += o.per_k[k];
    pi += o.pi;
    edge_success += o.edge_success;
    edge_wrap += o.edge_wrap;
    prefix_only += o.prefix_only;
    no_stop += o.no_stop;
    rule_success += o.rule_success;
    total += o.total;
    mismatches += o.mismatches;
  }
};

void tally_one(std::span<const Rank> x, int n, int r, PrefixState& state, EnumTally& t) {
  state.clear();
  std::size_t pos = 0;
  const StopOutcome so = detail::scan(n, r, state, [&] { return x[pos++]; });
  const LambdaClass lc = detail::classify_lambda_items(x, n, r);

  ++t.total;
  if (lc.k) {
    ++t.per_k[static_cast<std::size_t>(*lc.k)];
    if (lc.in_pi) ++t.pi;
  }
  if (!so.stop_position) {
    ++t.no_stop;
  } else {
    switch (so.classification) {
      case Outcome::SuccessAdjacent:
        ++t.rule_success;
        if (so.at_edge) ++t.edge_success;
        break;
      case Outcome::FailWraparound:
        if (so.at_edge) ++t.edge_wrap;
        break;
      case Outcome::FailPrefixOnly:
        ++t.prefix_only;
        break;
      case Outcome::FailNoStop:
        break;
    }
  }

  // Lambda(r,k) membership must coincide with a non-edge stop at k+1 on a
  // globally adjacent pair.
  const bool rule_in_lambda = so.stop_position && !so.at_edge &&
                              so.classification != Outcome::FailPrefixOnly;
  bool consistent = rule_in_lambda == lc.k.has_value();
  if (consistent && lc.k) {
    consistent = *so.stop_position == *lc.k + 1 &&
                 lc.in_pi == (so.classification == Outcome::FailWraparound);
  }
  if (!consistent) ++t.mismatches;
}

}  // namespace

ExactCount EnumerationReport::lambda_total() const {
  ExactCount s = 0;
  for (const auto& [k, c] : per_k_lambda) s += c;
  return s;
}

EnumerationReport enumerate_counts(int n, int r, const EnumerationOptions& opts) {
  const int cap = opts.force ? kMaxEnumerateForcedN : kMaxEnumerateN;
  require(n > 4 && n <= cap, "enumeration needs 4 < n <= " + std::to_string(cap) +
                                 (opts.force ? "" : " (use force to lift the guard)") +
                                 ", got n=" + std::to_string(n));
  const Threshold t(n, r);
  const int workers = std::clamp(opts.workers, 1, n);

  // Work unit u fixes x[1] = u + 1 and walks the (n-1)! suffixes in
  // lexicographic order.
  std::vector<EnumTally> partial(static_cast<std::size_t>(workers), EnumTally(n));
  run_workers(workers, [&](int w) {
    EnumTally& tally = partial[static_cast<std::size_t>(w)];
    PrefixState state(n);
    std::vector<Rank> x(static_cast<std::size_t>(n));
    for (int unit = w; unit < n; unit += workers) {
      x[0] = unit + 1;
      for (int i = 1, v = 1; i < n; ++v) {
        if (v != unit + 1) x[static_cast<std::size_t>(i++)] = v;
      }
      do {
        tally_one(x, n, t.r(), state, tally);
      } while (std::next_permutation(x.begin() + 1, x.end()));
    }
  });

  EnumTally sum(n);
  for (const auto& p : partial) sum.merge(p);

  EnumerationReport rep;
  rep.n = n;
  rep.r = r;
  for (int k = r; k <= n - 1; ++k) rep.per_k_lambda[k] = sum.per_k[static_cast<std::size_t>(k)];
  rep.pi_count = sum.pi;
  rep.edge_success = sum.edge_success;
  rep.edge_wrap = sum.edge_wrap;
  rep.prefix_only_fail = sum.prefix_only;
  rep.no_stop = sum.no_stop;
  rep.rule_success = sum.rule_success;
  rep.total = sum.total;
  rep.equivalence_mismatches = sum.mismatches;
  ensure(rep.total == factorial(n), "enumeration visited the wrong number of permutations");
  return rep;
}

ExactCount a002464_count(int n, bool force) {
  const int cap = force ? kMaxA002464ForcedN : kMaxA002464N;
  require(n >= 1 && n <= cap, "a002464 needs 1 <= n <= " + std::to_string(cap) +
                                  ", got n=" + std::to_string(n));
  // ways[mask * n + last]: orderings of the ranks in mask ending at `last`
  // with no consecutive pair differing by 1.
  const std::size_t states = std::size_t{1} << n;
  const auto nn = static_cast<std::size_t>(n);
  std::vector<std::uint64_t> ways(states * nn, 0);
  for (std::size_t v = 0; v < nn; ++v) ways[(std::size_t{1} << v) * nn + v] = 1;
  for (std::size_t mask = 1; mask < states; ++mask) {
    for (std::size_t last = 0; last < nn; ++last) {
      const std::uint64_t w = ways[mask * nn + last];
      if (w == 0) continue;
      for (std::size_t v = 0; v < nn; ++v) {
        if ((mask >> v) & 1U) continue;
        if (v + 1 == last || last + 1 == v) continue;
        ways[(mask | (std::size_t{1} << v)) * nn + v] += w;
      }
    }
  }
  ExactCount total = 0;
  for (std::size_t last = 0; last < nn; ++last) total += ways[(states - 1) * nn + last];
  return total;
}

bool VerificationReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.match; });
}

std::optional<std::string> VerificationReport::first_mismatch() const {
  for (const auto& c : checks) {
    if (!c.match) return c.quantity;
  }
  return std::nullopt;
}

VerificationReport verify_against_exact(int n, int r, const EnumerationOptions& opts) {
  const EnumerationReport e = enumerate_counts(n, r, opts);
  const ExactCount nfact = factorial(n);

  VerificationReport rep;
  rep.n = n;
  rep.r = r;
  auto add = [&](std::string name, const ExactCount& got, const ExactCount& want) {
    rep.checks.push_back({std::move(name), got.str(), want.str(), got == want});
  };

  for (const auto& [k, c] : e.per_k_lambda) {
    add("lambda_k" + std::to_string(k), c, count_lambda_rk(n, r, k));
  }
  const ExactCount lambda = e.lambda_total();
  add("lambda_total", lambda, lambda_count(n, r));
  add("pi", e.pi_count, pi_count(n, r));

  const ExactRatio success_mass = success_probability_exact(n, r) * nfact;
  ensure(denominator(success_mass) == 1, "n! * success probability is not an integer");
  add("lambda_minus_pi", lambda - e.pi_count, numerator(success_mass));
  add("rule_success", e.rule_success, lambda - e.pi_count + e.edge_success);
  add("partition_total",
      lambda + e.edge_success + e.edge_wrap + e.prefix_only_fail + e.no_stop, nfact);
  add("equivalence_mismatches", e.equivalence_mismatches, 0);

  rep.edge_fraction = ExactRatio(e.edge_success, nfact);
  const ExactRatio edge_bound(2, n);
  rep.checks.push_back({"edge_fraction_bound", to_string(rep.edge_fraction),
                        "<= " + to_string(edge_bound), rep.edge_fraction <= edge_bound});
  return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo

namespace {

// Per-worker scratch: the partially shuffled order plus the swap log used to
// restore it to the identity after each trial.
class TrialRunner {
 public:
  TrialRunner(int n, int r) : n_(n), r_(r), state_(n), order_(static_cast<std::size_t>(n)) {
    std::iota(order_.begin(), order_.end(), 1);
    swaps_.reserve(static_cast<std::size_t>(n));
  }

  StopOutcome run(std::uint64_t seed, std::uint64_t trial) {
    PhiloxStream rng(seed, trial);
    state_.clear();
    swaps_.clear();
    std::uint32_t i = 0;
    const auto n = static_cast<std::uint32_t>(n_);
    const StopOutcome out = detail::scan(n_, r_, state_, [&] {
      const std::uint32_t j = i + rng.uniform_below(n - i);
      std::swap(order_[i], order_[j]);
      swaps_.push_back(j);
      return order_[i++];
    });
    for (std::size_t k = swaps_.size(); k-- > 0;) std::swap(order_[k], order_[swaps_[k]]);
    return out;
  }

 private:
  int n_;
  int r_;
  PrefixState state_;
  std::vector<Rank> order_;
  std::vector<std::uint32_t> swaps_;
};

void fill_stats(EstimateResult& res) {
  const auto t = static_cast<double>(res.trials);
  res.p_hat = static_cast<double>(res.tally(Outcome::SuccessAdjacent)) / t;
  res.stderr_ = std::sqrt(res.p_hat * (1.0 - res.p_hat) / t);
  res.ci95_low = res.p_hat - 1.96 * res.stderr_;
  res.ci95_high = res.p_hat + 1.96 * res.stderr_;
}

}  // namespace

StopOutcome simulate_trial(int n, int r, std::uint64_t seed, std::uint64_t trial) {
  const Threshold t(n, r);
  TrialRunner runner(t.n(), t.r());
  return runner.run(seed, trial);
}

EstimateResult estimate(int n, int r, std::uint64_t trials, std::uint64_t seed, int workers) {
  const Threshold t(n, r);
  require(n > 4, "estimate needs n > 4, got " + std::to_string(n));
  require(trials >= 1, "estimate needs at least one trial");
  require(workers >= 1, "estimate needs at least one worker");
  const auto w_count = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), trials));

  using Tally = std::array<std::uint64_t, kOutcomeCount>;
  std::vector<Tally> tallies(static_cast<std::size_t>(w_count), Tally{});
  std::vector<Tally> edge(static_cast<std::size_t>(w_count), Tally{});

  run_workers(w_count, [&](int w) {
    const auto wi = static_cast<std::uint64_t>(w);
    const std::uint64_t begin = trials * wi / static_cast<std::uint64_t>(w_count);
    const std::uint64_t end = trials * (wi + 1) / static_cast<std::uint64_t>(w_count);
    TrialRunner runner(t.n(), t.r());
    Tally& mine = tallies[static_cast<std::size_t>(w)];
    Tally& mine_edge = edge[static_cast<std::size_t>(w)];
    for (std::uint64_t trial = begin; trial < end; ++trial) {
      const StopOutcome o = runner.run(seed, trial);
      const auto c = static_cast<std::size_t>(o.classification);
      ++mine[c];
      if (o.at_edge) ++mine_edge[c];
    }
  });

  EstimateResult res;
  res.n = n;
  res.r = r;
  res.trials = trials;
  res.seed = seed;
  for (std::size_t w = 0; w < tallies.size(); ++w) {
    for (std::size_t c = 0; c < kOutcomeCount; ++c) {
      res.tallies[c] += tallies[w][c];
      res.edge_tallies[c] += edge[w][c];
    }
  }
  fill_stats(res);
  return res;
}

std::vector<SweepRow> sweep(int n, const std::vector<double>& alphas, std::uint64_t trials,
                            std::uint64_t seed, int workers) {
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    SweepRow row;
    row.alpha = alpha;
    try {
      const Threshold t = threshold_from_alpha(n, alpha);
      row.result = estimate(t.n(), t.r(), trials, seed, workers);
    } catch (const DomainError& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> parse_alpha_range(const std::string& text) {
  auto parse = [&](const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == tok.size() && !tok.empty(), "malformed alpha list '" + text + "'");
    return v;
  };
  // Snap to 12 decimals so 0.1 + 2 * 0.1 reads back as 0.3.
  auto snap = [](double v) { return std::round(v * 1e12) / 1e12; };

  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    require(parts.size() == 3, "alpha range must be start:end:step, got '" + text + "'");
    const double start = parse(parts[0]);
    const double end = parse(parts[1]);
    const double step = parse(parts[2]);
    require(step > 0.0 && end >= start, "alpha range needs step > 0 and end >= start");
    const auto count = static_cast<long>(std::floor((end - start) / step + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) out.push_back(snap(start + static_cast<double>(i) * step));
  } else {
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) out.push_back(parse(tok));
  }
  require(!out.empty(), "empty alpha list");
  return out;
}

}  // namespace stoprule
