#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skillmatch/config.hpp"
#include "skillmatch/domain.hpp"
#include "skillmatch/feedback.hpp"
#include "skillmatch/policy.hpp"
#include "skillmatch/random.hpp"

namespace skillmatch {

struct BlockRecord {
  AssignmentAction action;
  std::vector<RewardSample> rewards;  // parallel to action.pairs
  /// Parallel to action.pairs: share of rating channels the worker truly
  /// qualified for.
  std::vector<double> satisfied;
  double cumulative_reward = 0.0;
};

struct RunTrace {
  std::vector<BlockRecord> blocks;
  std::size_t tasks_offered = 0;

  double total_reward() const;
  std::size_t assignments() const;
};

/// Runs one policy over the instance's task stream.
///
/// Block mode splits the tasks into consecutive blocks of worker-count size
/// (a trailing partial block is dropped); unrestricted mode offers one task
/// at a time and lets workers repeat. Reward draws and the policy's own
/// randomness come from separate substreams of `seed`.
RunTrace run_simulation(const ProblemInstance& instance, Policy& policy,
                        const FeedbackModel& feedback, MatchingMode mode,
                        Rng::Seed seed);

/// 100 * policy reward / oracle reward; 100 when the oracle earned nothing.
double percent_of_optimal(const RunTrace& policy_trace,
                          const RunTrace& oracle_trace);
/// Percent of received ratings that were positive.
double success_rate(const RunTrace& trace);
/// Percent of rating channels where the worker truly met the requirement.
double qualification_rate(const RunTrace& trace);

struct MetricSeries {
  std::string name;
  MetricKind metric = MetricKind::kPercentOfOptimal;
  std::string x_key;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> std_error;

  friend bool operator==(const MetricSeries&, const MetricSeries&) = default;
};

/// Called once per (point, run, series) execution with a hash of the
/// instance the series ran on. Runs execute in parallel, so the observer
/// must be safe to call concurrently.
using InstanceObserver = std::function<void(
    std::size_t point, std::size_t run, const std::string& series,
    std::uint64_t instance_fingerprint)>;

/// For every x point and run: the tasks are fixed per point, workers are
/// regenerated per run, and every series runs on the same instance with its
/// own reward substream. The oracle baseline shares its substream with any
/// oracle series, so that series is exactly 100 percent of optimal.
std::vector<MetricSeries> run_experiment(const ExperimentConfig& config,
                                         const InstanceObserver& observer = {});

}  // namespace skillmatch
