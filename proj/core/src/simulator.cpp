#include "skillmatch/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "skillmatch/error.hpp"

namespace skillmatch {

double RunTrace::total_reward() const {
  return blocks.empty() ? 0.0 : blocks.back().cumulative_reward;
}

std::size_t RunTrace::assignments() const {
  std::size_t count = 0;
  for (const auto& b : blocks) count += b.action.pairs.size();
  return count;
}

RunTrace run_simulation(const ProblemInstance& instance, Policy& policy,
                        const FeedbackModel& feedback, MatchingMode mode,
                        Rng::Seed seed) {
  const std::size_t n = instance.workers.size();
  if (n == 0 || instance.tasks.empty()) {
    throw ConfigError("cannot simulate an empty instance", "workers");
  }
  if (policy.worker_count() != n) {
    throw ContractViolation("policy and instance disagree on worker count");
  }
  Rng reward_rng(Rng::derive(seed, "rewards"));
  Rng policy_rng(Rng::derive(seed, "policy"));

  const std::size_t block_size = mode == MatchingMode::kBlock ? n : 1;
  const std::size_t block_count = instance.tasks.size() / block_size;
  const std::span<const TaskSpec> all_tasks(instance.tasks);

  RunTrace trace;
  trace.tasks_offered = block_count * block_size;
  trace.blocks.reserve(block_count);
  double cumulative = 0.0;
  for (std::size_t b = 0; b < block_count; ++b) {
    const auto block = all_tasks.subspan(b * block_size, block_size);
    BlockRecord record;
    record.action = policy.choose_block(block, policy_rng);
    if (!is_valid(record.action, MatchingMode::kBlock)) {
      throw ContractViolation("policy returned an invalid assignment");
    }
    for (const auto& pair : record.action.pairs) {
      const TaskSpec& task = instance.tasks.at(pair.task);
      const Worker& worker = instance.workers.at(pair.worker);
      record.rewards.push_back(draw_reward(worker, task, feedback, reward_rng));
      record.satisfied.push_back(
          satisfied_fraction(worker.true_skills, task, feedback.scope));
      cumulative += record.rewards.back().value();
    }
    for (std::size_t i = 0; i < record.rewards.size(); ++i) {
      policy.observe(instance.tasks[record.action.pairs[i].task],
                     record.rewards[i]);
    }
    record.cumulative_reward = cumulative;
    trace.blocks.push_back(std::move(record));
  }
  return trace;
}

double percent_of_optimal(const RunTrace& policy_trace,
                          const RunTrace& oracle_trace) {
  if (policy_trace.tasks_offered != oracle_trace.tasks_offered ||
      policy_trace.blocks.size() != oracle_trace.blocks.size()) {
    throw ContractViolation("percent_of_optimal: traces cover different tasks");
  }
  const double optimum = oracle_trace.total_reward();
  if (optimum == 0.0) return 100.0;
  return 100.0 * (policy_trace.total_reward() / optimum);
}

double success_rate(const RunTrace& trace) {
  std::size_t positive = 0;
  std::size_t total = 0;
  for (const auto& block : trace.blocks) {
    for (const auto& sample : block.rewards) {
      for (auto r : sample.ratings) positive += r;
      total += sample.ratings.size();
    }
  }
  return total == 0 ? 0.0
                    : 100.0 * static_cast<double>(positive) /
                          static_cast<double>(total);
}

double qualification_rate(const RunTrace& trace) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& block : trace.blocks) {
    for (double s : block.satisfied) sum += s;
    count += block.satisfied.size();
  }
  return count == 0 ? 0.0 : 100.0 * sum / static_cast<double>(count);
}

namespace {

std::string substream_key(const PolicySpec& spec) {
  return spec.kind == PolicyKind::kOracle ? std::string("oracle") : spec.label;
}

PolicySpec oracle_spec() {
  PolicySpec spec;
  spec.kind = PolicyKind::kOracle;
  spec.label = default_label(PolicyKind::kOracle);
  return spec;
}

double metric_value(MetricKind metric, const RunTrace& trace,
                    const RunTrace& oracle) {
  switch (metric) {
    case MetricKind::kPercentOfOptimal: return percent_of_optimal(trace, oracle);
    case MetricKind::kSuccessRate: return success_rate(trace);
    case MetricKind::kQualificationRate: return qualification_rate(trace);
  }
  return 0.0;
}

/// Metric values of every series for one run of one point.
std::vector<double> execute_run(const ExperimentConfig& point,
                                const ProblemInstance& base,
                                Rng::Seed point_seed, std::size_t point_index,
                                std::size_t run,
                                const InstanceObserver& observer) {
  const Rng::Seed run_seed = Rng::derive(point_seed, "run", run);
  const ProblemInstance instance =
      regenerate_workers(base, Rng::derive(run_seed, "workers"));
  const auto skills = instance.true_skills();
  const std::size_t block = point.mode == MatchingMode::kBlock
                                ? instance.workers.size()
                                : 1;
  PolicyContext context{instance.workers.size(), instance.skill_dims,
                        point.feedback,
                        instance.tasks.size() / block * block, skills};
  const std::uint64_t print = observer ? fingerprint(instance) : 0;

  auto execute = [&](const PolicySpec& spec) {
    auto policy = make_policy(spec, context);
    if (observer) observer(point_index, run, spec.label, print);
    return run_simulation(instance, *policy, point.feedback, point.mode,
                          Rng::derive(run_seed, substream_key(spec)));
  };

  const RunTrace oracle = execute(oracle_spec());
  std::vector<double> values;
  values.reserve(point.policies.size());
  for (const auto& spec : point.policies) {
    values.push_back(metric_value(point.metric, execute(spec), oracle));
  }
  return values;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<MetricSeries> run_experiment(const ExperimentConfig& config,
                                         const InstanceObserver& observer) {
  validate(config);
  const auto xs = config.x_values();
  std::vector<MetricSeries> series;
  for (const auto& spec : config.policies) {
    series.push_back(MetricSeries{spec.label, config.metric, config.sweep_key,
                                  {}, {}, {}});
  }

  for (std::size_t p = 0; p < xs.size(); ++p) {
    const ExperimentConfig point = point_config(config, p);
    const Rng::Seed point_seed = Rng::derive(config.seed, "point", p);
    const ProblemInstance base =
        generate_instance(point.workers, point.tasks.front(), point.skills,
                          Rng::derive(point_seed, "instance"));

    std::vector<std::vector<double>> per_run(point.runs);
    parallel_for(point.runs, point.threads, [&](std::size_t r) {
      per_run[r] = execute_run(point, base, point_seed, p, r, observer);
    });

    const double runs = static_cast<double>(point.runs);
    for (std::size_t s = 0; s < series.size(); ++s) {
      double sum = 0.0;
      for (const auto& values : per_run) sum += values[s];
      const double mean = sum / runs;
      double sq = 0.0;
      for (const auto& values : per_run) sq += (values[s] - mean) * (values[s] - mean);
      const double se =
          point.runs > 1 ? std::sqrt(sq / (runs - 1.0)) / std::sqrt(runs) : 0.0;
      series[s].x.push_back(xs[p]);
      series[s].mean.push_back(mean);
      series[s].std_error.push_back(se);
    }
  }
  return series;
}

}  // namespace skillmatch
