#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skillmatch/domain.hpp"
#include "skillmatch/feedback.hpp"
#include "skillmatch/policy.hpp"

namespace skillmatch {

enum class MetricKind {
  kPercentOfOptimal,   // 100 * policy reward / paired oracle reward
  kSuccessRate,        // percent of positive ratings received
  kQualificationRate,  // percent of rating channels truly qualified
};

enum class OutputFormat { kCsv, kJson, kCoords };

std::string_view to_string(MetricKind kind) noexcept;
std::string_view to_string(OutputFormat format) noexcept;

/// One series per policy kind, in the order oracle, hme, egreedy, ucb, bef,
/// random.
std::vector<PolicySpec> all_policies();

/// Everything needed to reproduce one experiment.
///
/// The x axis is `sweep_key`. For "tasks" the x values are `tasks`; for any
/// other key they are `sweep_values` and `tasks` must hold a single count.
struct ExperimentConfig {
  std::size_t workers = 10;
  std::vector<std::size_t> tasks = {300};
  std::size_t runs = 25;
  std::size_t skills = 3;
  FeedbackModel feedback;
  MatchingMode mode = MatchingMode::kBlock;
  std::vector<PolicySpec> policies = all_policies();
  MetricKind metric = MetricKind::kPercentOfOptimal;
  std::uint64_t seed = 1;
  OutputFormat format = OutputFormat::kCsv;
  std::string sweep_key = "tasks";
  std::vector<double> sweep_values;
  std::size_t threads = 0;  // 0: hardware concurrency

  std::size_t point_count() const;
  std::vector<double> x_values() const;
};

/// The keys a sweep may vary.
const std::vector<std::string>& sweep_keys();

/// Config for x point `index`: the sweep key set to its value and a single
/// task count.
ExperimentConfig point_config(const ExperimentConfig& config,
                              std::size_t index);

/// Throws ConfigError naming the first offending key.
void validate(const ExperimentConfig& config);

/// Parses a flat JSON object of dotted keys. Missing keys keep their
/// defaults; unknown keys are rejected. `base` supplies the defaults.
ExperimentConfig parse_config_json(std::string_view text,
                                   const ExperimentConfig& base);
ExperimentConfig parse_config_file(const std::string& path,
                                   const ExperimentConfig& base);

/// Command-line overrides; unset fields leave the config alone.
struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> workers;
  std::optional<std::vector<std::size_t>> tasks;
  std::optional<std::size_t> skills;
  std::optional<double> flip_prob;
  std::optional<std::vector<std::string>> policies;
  std::optional<OutputFormat> format;
  std::optional<std::size_t> threads;
};

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides);

/// Names accepted by `preset`.
const std::vector<std::string>& preset_names();
/// fig1: BEF with the min-max vs the average estimator.
/// fig2: HME success rate over flip probabilities 0.0 .. 1.0.
/// fig3: all six policies, percent of optimal.
ExperimentConfig preset(std::string_view name);

std::vector<std::size_t> parse_count_list(std::string_view text,
                                          std::string_view key);
std::optional<OutputFormat> parse_output_format(std::string_view text) noexcept;

}  // namespace skillmatch
