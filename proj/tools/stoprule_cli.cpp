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

// stoprule: command-line front end over the libstoprule C API.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stoprule/stoprule.h"

namespace {

using TablePtr = std::unique_ptr<sr_table, decltype(&sr_table_free)>;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json cell_json(const sr_table* t, size_t row, size_t col) {
  switch (sr_table_cell_kind(t, row, col)) {
    case SR_CELL_NULL: return nullptr;
    case SR_CELL_INT: return sr_table_cell_int(t, row, col);
    case SR_CELL_REAL: return sr_table_cell_real(t, row, col);
    case SR_CELL_BOOL: return sr_table_cell_int(t, row, col) != 0;
    case SR_CELL_TEXT: return sr_table_cell_text(t, row, col);
  }
  return nullptr;
}

void write_table(const sr_table* t, const std::string& format, std::ostream& os) {
  const size_t cols = sr_table_columns(t);
  const size_t rows = sr_table_rows(t);
  if (format == "json") {
    for (size_t r = 0; r < rows; ++r) {
      nlohmann::ordered_json obj;
      for (size_t c = 0; c < cols; ++c) obj[sr_table_column_name(t, c)] = cell_json(t, r, c);
      os << obj.dump() << '\n';
    }
    return;
  }
  for (size_t c = 0; c < cols; ++c) os << (c ? "," : "") << sr_table_column_name(t, c);
  os << '\n';
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) os << (c ? "," : "") << csv_escape(sr_table_cell_text(t, r, c));
    os << '\n';
  }
}

void write_error(const std::string& command, sr_status status, const std::string& message,
                 const std::string& format, std::ostream& os) {
  if (format == "json") {
    nlohmann::ordered_json obj;
    obj["command"] = command;
    obj["error"] = sr_status_name(status);
    obj["message"] = message;
    os << obj.dump() << '\n';
  } else {
    os << "command,error,message\n"
       << csv_escape(command) << ',' << sr_status_name(status) << ',' << csv_escape(message) << '\n';
  }
}

int default_workers() {
  if (const char* env = std::getenv("STOPRULE_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjacent-pair secretary stopping rule: exact counts, enumeration, simulation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sr_version()));

  sr_config cfg;
  sr_config_init(&cfg);
  cfg.workers = default_workers();
  int n = 0;
  int r = 0;
  double alpha = 0.0;
  std::string alphas;
  std::string format = "csv";
  std::string out_path;
  bool force = false;

  struct Command {
    const char* name;
    const char* help;
    sr_status (*fn)(const sr_config*, sr_table**);
    bool threshold;  // takes --r / --alpha
  };
  const Command commands[] = {
      {"formula", "Closed-form counts and probabilities", sr_cmd_formula, true},
      {"enumerate", "Exhaustive tallies over all n! interview orders", sr_cmd_enumerate, true},
      {"verify", "Compare enumeration with the closed forms (exit 0 iff all match)",
       sr_cmd_verify, true},
      {"simulate", "Monte Carlo estimate of the success probability", sr_cmd_simulate, true},
      {"sweep", "Monte Carlo estimates over a list of alphas", sr_cmd_sweep, false},
      {"a002464", "Count permutations without rising or falling successions", sr_cmd_a002464,
       false},
      {"optimal", "Best threshold for n by exact scan", sr_cmd_optimal, false},
  };

  const Command* chosen = nullptr;
  for (const auto& cmd : commands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--n", n, "Number of applicants")->required();
    if (cmd.threshold) {
      auto* ropt = sub->add_option("--r", r, "Threshold: first checked stop position");
      auto* aopt = sub->add_option("--alpha", alpha, "Threshold as a fraction, r = floor(alpha n)");
      ropt->excludes(aopt);
      aopt->excludes(ropt);
    }
    const std::string name = cmd.name;
    if (name == "simulate" || name == "sweep") {
      sub->add_option("--trials", cfg.trials, "Number of Monte Carlo trials")->capture_default_str();
      sub->add_option("--seed", cfg.seed, "Run seed")->capture_default_str();
    }
    if (name == "sweep") sub->add_option("--alphas", alphas, "start:end:step or a,b,c")->required();
    if (name != "formula" && name != "optimal") {
      sub->add_option("--workers", cfg.workers, "Worker threads (default $STOPRULE_WORKERS or 1)");
    }
    if (name == "enumerate" || name == "verify" || name == "a002464") {
      sub->add_flag("--force", force, "Lift the size guard");
    }
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    sub->callback([&chosen, &cmd] { chosen = &cmd; });
  }

  CLI11_PARSE(app, argc, argv);

  cfg.n = n;
  for (const auto* sub : app.get_subcommands()) {
    const auto given = [sub](const char* name) {
      const auto* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--r")) {
      cfg.r = r;
      cfg.has_r = 1;
    }
    if (given("--alpha")) {
      cfg.alpha = alpha;
      cfg.has_alpha = 1;
    }
  }
  cfg.alphas = alphas.empty() ? nullptr : alphas.c_str();
  cfg.force = force;

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open " << out_path << " for writing\n";
      return 1;
    }
  }
  std::ostream& os = out_path.empty() ? std::cout : file;

  sr_table* raw = nullptr;
  const sr_status status = chosen->fn(&cfg, &raw);
  TablePtr table(raw, &sr_table_free);
  if (table) write_table(table.get(), format, os);
  if (status != SR_OK) {
    const std::string message = sr_last_error();
    if (!table) write_error(chosen->name, status, message, format, os);
    std::cerr << chosen->name << ": " << message << '\n';
    return status == SR_ERR_VERIFY_FAILED ? 3 : 2;
  }
  return 0;
}
