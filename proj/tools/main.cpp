// skillmatch: run matching experiments and inspect assignments.
//
//   skillmatch run    [--config PATH] [--preset NAME] [overrides...]
//   skillmatch preset NAME [overrides...]
//   skillmatch sweep  --key KEY --values V1,V2,... [overrides...]
//   skillmatch solve  MATRIX_FILE
//
// Exit codes: 0 success, 2 configuration error, 3 runtime invariant violation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "skillmatch/assignment.hpp"
#include "skillmatch/config.hpp"
#include "skillmatch/error.hpp"
#include "skillmatch/report.hpp"
#include "skillmatch/simulator.hpp"

namespace {

using namespace skillmatch;

constexpr int kConfigErrorExit = 2;
constexpr int kRuntimeErrorExit = 3;

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::string out_path;
  std::string tasks;
  std::string policies;
  std::string format;
  ConfigOverrides overrides;
};

void add_common_options(CLI::App& cmd, CommonOptions& opts,
                        bool with_preset_flag) {
  cmd.add_option("--config", opts.config_path, "JSON config file");
  if (with_preset_flag) {
    cmd.add_option("--preset", opts.preset_name, "Start from a preset (fig1, fig2, fig3)");
  }
  cmd.add_option("--seed", opts.overrides.seed, "Master seed (fallback: MATCH_SEED)");
  cmd.add_option("--runs", opts.overrides.runs, "Runs per point");
  cmd.add_option("--workers", opts.overrides.workers, "Worker count");
  cmd.add_option("--tasks", opts.tasks, "Task count(s), comma separated");
  cmd.add_option("--skills", opts.overrides.skills, "Skill dimensions");
  cmd.add_option("--flip-prob", opts.overrides.flip_prob, "Rating flip probability");
  cmd.add_option("--policies", opts.policies,
                 "Comma separated: oracle,hme,egreedy,ucb,bef,random");
  cmd.add_option("--format", opts.format, "csv, json or coords");
  cmd.add_option("--threads", opts.overrides.threads, "Worker threads (0: all cores)");
  cmd.add_option("--out", opts.out_path, "Write results here instead of stdout");
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

ExperimentConfig build_config(CommonOptions& opts) {
  ExperimentConfig config =
      opts.preset_name.empty() ? ExperimentConfig{} : preset(opts.preset_name);
  if (const char* env = std::getenv("MATCH_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("MATCH_SEED is not an unsigned integer", "MATCH_SEED");
    }
  }
  if (!opts.config_path.empty()) {
    config = parse_config_file(opts.config_path, config);
  }
  if (!opts.tasks.empty()) opts.overrides.tasks = parse_count_list(opts.tasks, "tasks");
  if (!opts.policies.empty()) opts.overrides.policies = split(opts.policies);
  if (!opts.format.empty()) {
    const auto f = parse_output_format(opts.format);
    if (!f) throw ConfigError("--format must be csv, json or coords", "format");
    opts.overrides.format = *f;
  }
  apply_overrides(config, opts.overrides);
  return config;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path, "out");
  out << text;
}

int run_experiment_command(CommonOptions& opts) {
  const ExperimentConfig config = build_config(opts);
  const auto series = run_experiment(config);
  write_output(emit_results(series, config.format), opts.out_path);
  return 0;
}

CostMatrix read_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read matrix file " + path, "matrix");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw ConfigError("matrix entry is not a number: " + token, "matrix");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  try {
    return CostMatrix::from_rows(rows);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what(), "matrix");
  }
}

int solve_command(const std::string& path) {
  const Matching m = solve(read_matrix(path));
  std::cout << "total_cost " << format_number(m.total_cost) << '\n';
  for (std::size_t r = 0; r < m.column_of_row.size(); ++r) {
    std::cout << r << ' ' << m.column_of_row[r] << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matching workers of unknown skill to tasks: experiments and tools"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "Run an experiment from a config and/or flags");
  add_common_options(*run, run_opts, true);

  CommonOptions preset_opts;
  auto* preset_cmd = app.add_subcommand("preset", "Run a named figure preset");
  preset_cmd->add_option("name", preset_opts.preset_name, "fig1, fig2 or fig3")->required();
  add_common_options(*preset_cmd, preset_opts, false);

  CommonOptions sweep_opts;
  std::string sweep_key;
  std::string sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Vary one key over a list of values");
  sweep->add_option("--key", sweep_key, "Key to vary")->required();
  sweep->add_option("--values", sweep_values, "Comma separated values")->required();
  add_common_options(*sweep, sweep_opts, true);

  std::string matrix_path;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one assignment problem from a matrix file");
  solve_cmd->add_option("matrix", matrix_path, "Whitespace separated rows")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigErrorExit;
  }

  try {
    if (*run) return run_experiment_command(run_opts);
    if (*preset_cmd) return run_experiment_command(preset_opts);
    if (*solve_cmd) return solve_command(matrix_path);
    if (*sweep) {
      ExperimentConfig config = build_config(sweep_opts);
      config.sweep_key = sweep_key;
      if (sweep_key == "tasks") {
        config.tasks = parse_count_list(sweep_values, "sweep.values");
      } else {
        config.sweep_values.clear();
        for (const auto& v : split(sweep_values)) {
          try {
            config.sweep_values.push_back(std::stod(v));
          } catch (const std::exception&) {
            throw ConfigError("sweep value is not a number: " + v, "sweep.values");
          }
        }
      }
      validate(config);
      const auto series = run_experiment(config);
      write_output(emit_results(series, config.format), sweep_opts.out_path);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (!e.key().empty()) std::cerr << " [" << e.key() << "]";
    std::cerr << ": " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeErrorExit;
  }
  return 0;
}
