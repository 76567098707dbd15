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

#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "stoprule/core.hpp"
#include "stoprule/error.hpp"
#include "stoprule/exact.hpp"
#include "stoprule/experiments.hpp"
#include "stoprule/rule.hpp"
#include "stoprule/stoprule.h"

using namespace stoprule;

namespace {

thread_local std::string g_last_error;

// Counts with n! factors are skipped above this n in the formula table.
constexpr int kMaxFactorialN = 20000;

struct Cell {
  sr_cell_kind kind = SR_CELL_NULL;
  std::string text;
  std::int64_t i = 0;
  double d = 0.0;
};

Cell null_cell() { return {}; }
Cell int_cell(std::int64_t v) { return {SR_CELL_INT, std::to_string(v), v, static_cast<double>(v)}; }
Cell uint_cell(std::uint64_t v) {
  return {SR_CELL_INT, std::to_string(v), static_cast<std::int64_t>(v), static_cast<double>(v)};
}
Cell text_cell(std::string s) { return {SR_CELL_TEXT, std::move(s), 0, 0.0}; }
Cell bool_cell(bool b) { return {SR_CELL_BOOL, b ? "true" : "false", b ? 1 : 0, b ? 1.0 : 0.0}; }
Cell real_cell(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return {SR_CELL_REAL, buf, 0, std::strtod(buf, nullptr)};
}
// Exact counts may exceed 64 bits; they travel as decimal text.
Cell count_cell(const ExactCount& c) { return text_cell(c.str()); }
Cell ratio_cell(const ExactRatio& q) { return text_cell(to_string(q)); }

sr_status fail(sr_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class Fn>
sr_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const DomainError& e) {
    return fail(SR_ERR_DOMAIN, e.what());
  } catch (const InternalError& e) {
    return fail(SR_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SR_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(SR_ERR_INTERNAL, e.what());
  }
}

std::vector<Rank> copy_perm(const int32_t* perm, size_t n) {
  if (perm == nullptr && n > 0) throw DomainError("null permutation");
  return std::vector<Rank>(perm, perm + n);
}

Threshold config_threshold(const sr_config& c) {
  if (c.has_r && c.has_alpha) throw DomainError("give exactly one of r and alpha");
  if (c.has_r) return Threshold(c.n, c.r);
  if (c.has_alpha) return threshold_from_alpha(c.n, c.alpha);
  throw DomainError("a threshold is required: give r or alpha");
}

Cell alpha_cell(const sr_config& c) { return c.has_alpha ? real_cell(c.alpha) : null_cell(); }

}  // namespace

struct sr_table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit sr_table(std::vector<std::string> cols) : columns(std::move(cols)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw InternalError("row width does not match header");
    rows.push_back(std::move(row));
  }

  const Cell* cell(size_t r, size_t c) const {
    if (r >= rows.size() || c >= columns.size()) return nullptr;
    return &rows[r][c];
  }
};

struct sr_prefix {
  PrefixState state;
};

namespace {

sr_status emit(std::unique_ptr<sr_table> t, sr_table** out, sr_status status = SR_OK) {
  *out = t.release();
  return status;
}

const std::vector<std::string> kEstimateColumns = {
    "command",         "n",
    "r",               "alpha",
    "trials",          "seed",
    "p_hat",           "stderr",
    "ci95_low",        "ci95_high",
    "success_adjacent", "fail_wraparound",
    "fail_prefix_only", "fail_no_stop",
    "edge_success",    "edge_wraparound",
    "edge_prefix_only", "exact_lambda_minus_pi",
    "exact_lambda_minus_pi_decimal", "error"};

std::vector<Cell> estimate_row(const char* command, const EstimateResult& e, Cell alpha) {
  const ExactRatio exact = success_probability_exact(e.n, e.r);
  return {text_cell(command),
          int_cell(e.n),
          int_cell(e.r),
          std::move(alpha),
          uint_cell(e.trials),
          uint_cell(e.seed),
          real_cell(e.p_hat),
          real_cell(e.stderr_),
          real_cell(e.ci95_low),
          real_cell(e.ci95_high),
          uint_cell(e.tally(Outcome::SuccessAdjacent)),
          uint_cell(e.tally(Outcome::FailWraparound)),
          uint_cell(e.tally(Outcome::FailPrefixOnly)),
          uint_cell(e.tally(Outcome::FailNoStop)),
          uint_cell(e.edge_tally(Outcome::SuccessAdjacent)),
          uint_cell(e.edge_tally(Outcome::FailWraparound)),
          uint_cell(e.edge_tally(Outcome::FailPrefixOnly)),
          ratio_cell(exact),
          real_cell(to_double(exact)),
          text_cell("")};
}

void fill_estimate(const EstimateResult& e, sr_estimate* out) {
  out->n = e.n;
  out->r = e.r;
  out->trials = e.trials;
  out->seed = e.seed;
  out->p_hat = e.p_hat;
  out->std_error = e.stderr_;
  out->ci95_low = e.ci95_low;
  out->ci95_high = e.ci95_high;
  for (std::size_t c = 0; c < kOutcomeCount; ++c) {
    out->tallies[c] = e.tallies[c];
    out->edge_tallies[c] = e.edge_tallies[c];
  }
}

}  // namespace

extern "C" {

const char* sr_version(void) { return "1.0.0"; }

const char* sr_status_name(sr_status status) {
  switch (status) {
    case SR_OK: return "ok";
    case SR_ERR_DOMAIN: return "domain_error";
    case SR_ERR_INVALID_ARG: return "invalid_argument";
    case SR_ERR_INTERNAL: return "internal_error";
    case SR_ERR_VERIFY_FAILED: return "verification_failed";
    case SR_ERR_OUT_OF_MEMORY: return "out_of_memory";
  }
  return "unknown";
}

const char* sr_last_error(void) { return g_last_error.c_str(); }

sr_status sr_threshold_from_alpha(int32_t n, double alpha, int32_t* r_out) {
  if (r_out == nullptr) return fail(SR_ERR_INVALID_ARG, "null output pointer");
  return guarded([&] {
    *r_out = threshold_from_alpha(n, alpha).r();
    return SR_OK;
  });
}

sr_status sr_run_rule(const int32_t* perm, size_t n, int32_t r, sr_stop_outcome* out) {
  if (out == nullptr) return fail(SR_ERR_INVALID_ARG, "null output pointer");
  return guarded([&] {
    const Permutation x(copy_perm(perm, n));
    const StopOutcome o = run_rule(x, Threshold(x.size(), r));
    *out = sr_stop_outcome{};
    out->stopped = o.stop_position.has_value();
    out->stop_position = o.stop_position.value_or(0);
    if (o.selected_pair) {
      out->first = o.selected_pair->first;
      out->second = o.selected_pair->second;
    }
    out->outcome = static_cast<sr_outcome>(o.classification);
    out->at_edge = o.at_edge;
    return SR_OK;
  });
}

sr_status sr_classify_lambda(const int32_t* perm, size_t n, int32_t r, int32_t* k_out,
                             int32_t* in_pi_out) {
  if (k_out == nullptr || in_pi_out == nullptr) return fail(SR_ERR_INVALID_ARG, "null output pointer");
  return guarded([&] {
    const Permutation x(copy_perm(perm, n));
    const LambdaClass c = classify_lambda(x, Threshold(x.size(), r));
    *k_out = c.k.value_or(0);
    *in_pi_out = c.in_pi;
    return SR_OK;
  });
}

sr_status sr_prefix_create(int32_t universe_size, sr_prefix** out) {
  if (out == nullptr) return fail(SR_ERR_INVALID_ARG, "null output pointer");
  return guarded([&] {
    *out = new sr_prefix{PrefixState(universe_size)};
    return SR_OK;
  });
}

void sr_prefix_free(sr_prefix* prefix) { delete prefix; }

sr_status sr_prefix_insert(sr_prefix* prefix, int32_t rank) {
  if (prefix == nullptr) return fail(SR_ERR_INVALID_ARG, "null prefix");
  return guarded([&] {
    prefix->state.insert(rank);
    return SR_OK;
  });
}

sr_status sr_prefix_pair_adjacent(sr_prefix* prefix, int32_t prev, int32_t next,
                                  int32_t* adjacent_out) {
  if (prefix == nullptr || adjacent_out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *adjacent_out = prefix_pair_adjacent(prefix->state, prev, next);
    return SR_OK;
  });
}

int32_t sr_prefix_size(const sr_prefix* prefix) { return prefix ? prefix->state.size() : 0; }

sr_status sr_success_probability(int32_t n, int32_t r, char* buf, size_t buf_len, double* value) {
  if (buf == nullptr) return fail(SR_ERR_INVALID_ARG, "null buffer");
  return guarded([&] {
    const ExactRatio p = success_probability_exact(n, r);
    const std::string s = to_string(p);
    if (s.size() + 1 > buf_len) return fail(SR_ERR_INVALID_ARG, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    if (value) *value = to_double(p);
    return SR_OK;
  });
}

sr_status sr_estimate_run(int32_t n, int32_t r, uint64_t trials, uint64_t seed, int32_t workers,
                          sr_estimate* out) {
  if (out == nullptr) return fail(SR_ERR_INVALID_ARG, "null output pointer");
  return guarded([&] {
    fill_estimate(estimate(n, r, trials, seed, workers), out);
    return SR_OK;
  });
}

void sr_table_free(sr_table* table) { delete table; }
size_t sr_table_rows(const sr_table* table) { return table ? table->rows.size() : 0; }
size_t sr_table_columns(const sr_table* table) { return table ? table->columns.size() : 0; }

const char* sr_table_column_name(const sr_table* table, size_t col) {
  if (table == nullptr || col >= table->columns.size()) return nullptr;
  return table->columns[col].c_str();
}

sr_cell_kind sr_table_cell_kind(const sr_table* table, size_t row, size_t col) {
  const Cell* c = table ? table->cell(row, col) : nullptr;
  return c ? c->kind : SR_CELL_NULL;
}

const char* sr_table_cell_text(const sr_table* table, size_t row, size_t col) {
  const Cell* c = table ? table->cell(row, col) : nullptr;
  return c ? c->text.c_str() : nullptr;
}

int64_t sr_table_cell_int(const sr_table* table, size_t row, size_t col) {
  const Cell* c = table ? table->cell(row, col) : nullptr;
  return c ? c->i : 0;
}

double sr_table_cell_real(const sr_table* table, size_t row, size_t col) {
  const Cell* c = table ? table->cell(row, col) : nullptr;
  return c ? c->d : 0.0;
}

void sr_config_init(sr_config* config) {
  if (config == nullptr) return;
  *config = sr_config{};
  config->trials = SR_DEFAULT_TRIALS;
  config->seed = SR_DEFAULT_SEED;
  config->workers = 1;
}

sr_status sr_cmd_formula(const sr_config* config, sr_table** out) {
  if (config == nullptr || out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const Threshold t = config_threshold(*config);
    const int n = t.n();
    const int r = t.r();
    auto table = std::make_unique<sr_table>(std::vector<std::string>{
        "command", "n", "r", "alpha", "lambda_ratio", "lambda_ratio_decimal", "lambda_count",
        "pi_count", "success_probability", "success_probability_decimal", "asymptotic_alpha",
        "asymptotic_success"});
    const ExactRatio lambda = lambda_ratio(n, r);
    const ExactRatio success = success_probability_exact(n, r);
    const double a = static_cast<double>(r) / n;
    const bool counts = n <= kMaxFactorialN;
    table->add({text_cell("formula"), int_cell(n), int_cell(r), alpha_cell(*config),
                ratio_cell(lambda), real_cell(to_double(lambda)),
                counts ? count_cell(lambda_count(n, r)) : null_cell(),
                counts ? count_cell(pi_count(n, r)) : null_cell(), ratio_cell(success),
                real_cell(to_double(success)), real_cell(a), real_cell(asymptotic_success(a))});
    return emit(std::move(table), out);
  });
}

sr_status sr_cmd_enumerate(const sr_config* config, sr_table** out) {
  if (config == nullptr || out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const Threshold t = config_threshold(*config);
    const EnumerationReport e =
        enumerate_counts(t.n(), t.r(), {config->workers, config->force != 0});
    auto table = std::make_unique<sr_table>(
        std::vector<std::string>{"command", "n", "r", "category", "k", "count", "fraction"});
    auto row = [&](const char* category, Cell k, const ExactCount& c) {
      table->add({text_cell("enumerate"), int_cell(e.n), int_cell(e.r), text_cell(category),
                  std::move(k), count_cell(c), ratio_cell(ExactRatio(c, e.total))});
    };
    for (const auto& [k, c] : e.per_k_lambda) row("lambda_k", int_cell(k), c);
    row("lambda_total", null_cell(), e.lambda_total());
    row("pi", null_cell(), e.pi_count);
    row("edge_success", null_cell(), e.edge_success);
    row("edge_wraparound", null_cell(), e.edge_wrap);
    row("prefix_only_fail", null_cell(), e.prefix_only_fail);
    row("no_stop", null_cell(), e.no_stop);
    row("rule_success", null_cell(), e.rule_success);
    row("equivalence_mismatches", null_cell(), e.equivalence_mismatches);
    row("total", null_cell(), e.total);
    return emit(std::move(table), out);
  });
}

sr_status sr_cmd_verify(const sr_config* config, sr_table** out) {
  if (config == nullptr || out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const Threshold t = config_threshold(*config);
    const VerificationReport v =
        verify_against_exact(t.n(), t.r(), {config->workers, config->force != 0});
    auto table = std::make_unique<sr_table>(std::vector<std::string>{
        "command", "n", "r", "quantity", "enumerated", "expected", "match", "note"});
    for (const auto& c : v.checks) {
      table->add({text_cell("verify"), int_cell(v.n), int_cell(v.r), text_cell(c.quantity),
                  text_cell(c.enumerated), text_cell(c.expected), bool_cell(c.match),
                  text_cell("")});
    }
    const auto bad = v.first_mismatch();
    const std::string note = bad ? "first mismatch: " + *bad : "all counts match";
    table->add({text_cell("verify"), int_cell(v.n), int_cell(v.r), text_cell("summary"),
                text_cell(""), text_cell(""), bool_cell(!bad), text_cell(note)});
    if (bad) {
      g_last_error = note;
      return emit(std::move(table), out, SR_ERR_VERIFY_FAILED);
    }
    return emit(std::move(table), out);
  });
}

sr_status sr_cmd_simulate(const sr_config* config, sr_table** out) {
  if (config == nullptr || out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const Threshold t = config_threshold(*config);
    const EstimateResult e = estimate(t.n(), t.r(), config->trials, config->seed, config->workers);
    auto table = std::make_unique<sr_table>(kEstimateColumns);
    table->add(estimate_row("simulate", e, alpha_cell(*config)));
    return emit(std::move(table), out);
  });
}

sr_status sr_cmd_sweep(const sr_config* config, sr_table** out) {
  if (config == nullptr || out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    if (config->alphas == nullptr) throw DomainError("sweep needs an alpha list");
    const auto alphas = parse_alpha_range(config->alphas);
    const auto rows = sweep(config->n, alphas, config->trials, config->seed, config->workers);
    auto table = std::make_unique<sr_table>(kEstimateColumns);
    for (const auto& row : rows) {
      if (row.result) {
        table->add(estimate_row("sweep", *row.result, real_cell(row.alpha)));
        continue;
      }
      std::vector<Cell> cells(kEstimateColumns.size());
      cells[0] = text_cell("sweep");
      cells[1] = int_cell(config->n);
      cells[3] = real_cell(row.alpha);
      cells[4] = uint_cell(config->trials);
      cells[5] = uint_cell(config->seed);
      cells.back() = text_cell(row.error);
      table->add(std::move(cells));
    }
    return emit(std::move(table), out);
  });
}

sr_status sr_cmd_a002464(const sr_config* config, sr_table** out) {
  if (config == nullptr || out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const int n = config->n;
    const ExactCount c = a002464_count(n, config->force != 0);
    const ExactCount total = factorial(n);
    const ExactRatio frac(c, total);
    // fraction is count/n! as counted; fraction_reduced is the same value in lowest terms.
    auto table = std::make_unique<sr_table>(
        std::vector<std::string>{"command", "n", "count", "fraction", "fraction_reduced",
                                 "fraction_decimal", "limit_e_minus_2"});
    table->add({text_cell("a002464"), int_cell(n), count_cell(c),
                text_cell(c.str() + "/" + total.str()), ratio_cell(frac),
                real_cell(to_double(frac)), real_cell(std::exp(-2.0))});
    return emit(std::move(table), out);
  });
}

sr_status sr_cmd_optimal(const sr_config* config, sr_table** out) {
  if (config == nullptr || out == nullptr) return fail(SR_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const int n = config->n;
    const OptimalThreshold best = optimal_threshold(n);
    auto table = std::make_unique<sr_table>(std::vector<std::string>{
        "command", "n", "r_star", "alpha_star", "p_star", "p_star_decimal", "asymptotic_limit"});
    table->add({text_cell("optimal"), int_cell(n), int_cell(best.r_star),
                real_cell(static_cast<double>(best.r_star) / n), ratio_cell(best.p_star),
                real_cell(to_double(best.p_star)), real_cell(asymptotic_success(0.5))});
    return emit(std::move(table), out);
  });
}

}  // extern "C"
