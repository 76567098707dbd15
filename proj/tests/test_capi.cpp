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

// Exercises libstoprule.so through its C header only.

#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "stoprule/stoprule.h"

namespace {

struct Table {
  sr_table* t = nullptr;
  ~Table() { sr_table_free(t); }

  long column(const char* name) const {
    for (size_t c = 0; c < sr_table_columns(t); ++c) {
      if (std::strcmp(sr_table_column_name(t, c), name) == 0) return static_cast<long>(c);
    }
    return -1;
  }
  std::string text(size_t row, const char* name) const {
    const long c = column(name);
    return c < 0 ? "<missing>" : sr_table_cell_text(t, row, static_cast<size_t>(c));
  }
};

sr_config config(int n) {
  sr_config c;
  sr_config_init(&c);
  c.n = n;
  return c;
}

}  // namespace

TEST(CApi, StatusNamesAndDefaults) {
  EXPECT_STREQ(sr_status_name(SR_OK), "ok");
  EXPECT_STREQ(sr_status_name(SR_ERR_DOMAIN), "domain_error");
  sr_config c;
  sr_config_init(&c);
  EXPECT_EQ(c.seed, SR_DEFAULT_SEED);
  EXPECT_EQ(c.workers, 1);
}

TEST(CApi, RunRuleAndClassify) {
  const int32_t x[] = {2, 5, 7, 4, 3, 1, 6};
  sr_stop_outcome o;
  ASSERT_EQ(sr_run_rule(x, 7, 4, &o), SR_OK);
  EXPECT_EQ(o.stopped, 1);
  EXPECT_EQ(o.stop_position, 5);
  EXPECT_EQ(o.first, 4);
  EXPECT_EQ(o.second, 3);
  EXPECT_EQ(o.outcome, SR_SUCCESS_ADJACENT);
  int32_t k = -1;
  int32_t in_pi = -1;
  ASSERT_EQ(sr_classify_lambda(x, 7, 4, &k, &in_pi), SR_OK);
  EXPECT_EQ(k, 4);
  EXPECT_EQ(in_pi, 0);
}

TEST(CApi, ErrorsCarryMessages) {
  const int32_t bad[] = {1, 1, 2, 3, 4};
  sr_stop_outcome o;
  EXPECT_EQ(sr_run_rule(bad, 5, 3, &o), SR_ERR_DOMAIN);
  EXPECT_NE(std::string(sr_last_error()).find("repeated"), std::string::npos);
  int32_t r = 0;
  EXPECT_EQ(sr_threshold_from_alpha(10, 0.2, &r), SR_ERR_DOMAIN);
  EXPECT_EQ(sr_threshold_from_alpha(100, 0.5, &r), SR_OK);
  EXPECT_EQ(r, 50);
  EXPECT_STREQ(sr_last_error(), "");
  EXPECT_EQ(sr_threshold_from_alpha(100, 0.5, nullptr), SR_ERR_INVALID_ARG);
}

TEST(CApi, PrefixHandle) {
  sr_prefix* p = nullptr;
  ASSERT_EQ(sr_prefix_create(9, &p), SR_OK);
  ASSERT_EQ(sr_prefix_insert(p, 5), SR_OK);
  ASSERT_EQ(sr_prefix_insert(p, 2), SR_OK);
  int32_t adj = 0;
  ASSERT_EQ(sr_prefix_pair_adjacent(p, 2, 4, &adj), SR_OK);
  EXPECT_EQ(adj, 1);
  EXPECT_EQ(sr_prefix_size(p), 3);
  EXPECT_EQ(sr_prefix_insert(p, 4), SR_ERR_DOMAIN);
  sr_prefix_free(p);
}

TEST(CApi, SuccessProbability) {
  char buf[64];
  double v = 0;
  ASSERT_EQ(sr_success_probability(7, 4, buf, sizeof buf, &v), SR_OK);
  EXPECT_STREQ(buf, "6/35");
  EXPECT_NEAR(v, 6.0 / 35.0, 1e-15);
  char tiny[3];
  EXPECT_EQ(sr_success_probability(7, 4, tiny, sizeof tiny, nullptr), SR_ERR_INVALID_ARG);
}

TEST(CApi, EstimateIsWorkerIndependent) {
  sr_estimate a;
  sr_estimate b;
  ASSERT_EQ(sr_estimate_run(60, 30, 5000, 8, 1, &a), SR_OK);
  ASSERT_EQ(sr_estimate_run(60, 30, 5000, 8, 8, &b), SR_OK);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(a.tallies[i], b.tallies[i]);
    EXPECT_EQ(a.edge_tallies[i], b.edge_tallies[i]);
  }
  EXPECT_EQ(a.tallies[0] + a.tallies[1] + a.tallies[2] + a.tallies[3], 5000U);
}

TEST(CApi, FormulaTable) {
  sr_config c = config(7);
  c.r = 4;
  c.has_r = 1;
  Table t;
  ASSERT_EQ(sr_cmd_formula(&c, &t.t), SR_OK);
  ASSERT_EQ(sr_table_rows(t.t), 1U);
  EXPECT_EQ(t.text(0, "lambda_ratio"), "1/5");
  EXPECT_EQ(t.text(0, "success_probability"), "6/35");
  EXPECT_EQ(t.text(0, "pi_count"), "144");
  EXPECT_EQ(t.text(0, "lambda_count"), "1008");
  EXPECT_EQ(t.text(0, "success_probability_decimal"), "0.171428571428571");
  EXPECT_EQ(sr_table_cell_kind(t.t, 0, static_cast<size_t>(t.column("alpha"))), SR_CELL_NULL);
}

TEST(CApi, FormulaFromAlphaAndGuard) {
  sr_config c = config(100);
  c.alpha = 0.5;
  c.has_alpha = 1;
  Table t;
  ASSERT_EQ(sr_cmd_formula(&c, &t.t), SR_OK);
  EXPECT_EQ(t.text(0, "r"), "50");

  sr_config bad = config(10);
  bad.alpha = 0.1;
  bad.has_alpha = 1;
  Table none;
  EXPECT_EQ(sr_cmd_formula(&bad, &none.t), SR_ERR_DOMAIN);
  EXPECT_EQ(none.t, nullptr);
  EXPECT_NE(std::string(sr_last_error()).find("r=1"), std::string::npos) << sr_last_error();

  sr_config both = config(10);
  both.has_alpha = 1;
  both.alpha = 0.5;
  both.has_r = 1;
  both.r = 5;
  Table t2;
  EXPECT_EQ(sr_cmd_formula(&both, &t2.t), SR_ERR_DOMAIN);
}

TEST(CApi, VerifyTable) {
  sr_config c = config(8);
  c.r = 5;
  c.has_r = 1;
  Table t;
  ASSERT_EQ(sr_cmd_verify(&c, &t.t), SR_OK);
  const size_t last = sr_table_rows(t.t) - 1;
  EXPECT_EQ(t.text(last, "quantity"), "summary");
  EXPECT_EQ(t.text(last, "note"), "all counts match");
  for (size_t row = 0; row <= last; ++row) EXPECT_EQ(t.text(row, "match"), "true");
}

TEST(CApi, EnumerateTable) {
  sr_config c = config(7);
  c.r = 4;
  c.has_r = 1;
  Table t;
  ASSERT_EQ(sr_cmd_enumerate(&c, &t.t), SR_OK);
  EXPECT_EQ(t.text(1, "category"), "lambda_k");
  EXPECT_EQ(t.text(1, "k"), "5");
  EXPECT_EQ(t.text(1, "count"), "280");
}

TEST(CApi, SweepAndSimulateShareColumns) {
  sr_config c = config(100);
  c.alphas = "0.0001,0.5";
  c.trials = 1000;
  Table sweep;
  ASSERT_EQ(sr_cmd_sweep(&c, &sweep.t), SR_OK);
  ASSERT_EQ(sr_table_rows(sweep.t), 2U);
  EXPECT_NE(sweep.text(0, "error"), "");
  EXPECT_EQ(sweep.text(1, "error"), "");
  EXPECT_EQ(sweep.text(1, "r"), "50");

  sr_config s = config(100);
  s.alpha = 0.5;
  s.has_alpha = 1;
  s.trials = 1000;
  Table sim;
  ASSERT_EQ(sr_cmd_simulate(&s, &sim.t), SR_OK);
  ASSERT_EQ(sr_table_columns(sim.t), sr_table_columns(sweep.t));
  EXPECT_EQ(sim.text(0, "success_adjacent"), sweep.text(1, "success_adjacent"));
}

TEST(CApi, A002464AndOptimal) {
  sr_config c = config(5);
  Table t;
  ASSERT_EQ(sr_cmd_a002464(&c, &t.t), SR_OK);
  EXPECT_EQ(t.text(0, "count"), "14");
  EXPECT_EQ(t.text(0, "fraction"), "14/120");
  EXPECT_EQ(t.text(0, "fraction_reduced"), "7/60");

  sr_config o = config(100);
  Table best;
  ASSERT_EQ(sr_cmd_optimal(&o, &best.t), SR_OK);
  EXPECT_EQ(best.text(0, "r_star"), "51");
  EXPECT_EQ(best.text(0, "p_star"), "12/25");
}
