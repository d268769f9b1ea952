#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillmatch/assignment.hpp"
#include "skillmatch/domain.hpp"
#include "skillmatch/estimation.hpp"
#include "skillmatch/feedback.hpp"
#include "skillmatch/random.hpp"

namespace skillmatch {

enum class PolicyKind {
  kOracle,
  kHme,
  kEpsilonGreedy,
  kUcb,
  kBoundedEpsilonFirst,
  kRandom,
};

std::string_view to_string(PolicyKind kind) noexcept;
/// Accepts the config names: oracle, hme, egreedy, ucb, bef, random.
std::optional<PolicyKind> parse_policy_kind(std::string_view name) noexcept;
/// Display name used for result series ("HME", "Epsilon Greedy", ...).
std::string default_label(PolicyKind kind);

struct EpsilonGreedyParams {
  double epsilon0 = 0.2;
  double drop = 0.99;  // per block
};

struct BefParams {
  std::optional<double> budget;  // unset: one unit per assignment in the run
  double explore_fraction = 0.1;
  double cost = 1.0;                 // c_w for every worker ...
  std::vector<double> worker_costs;  // ... unless given per worker
};

struct PolicySpec {
  PolicyKind kind = PolicyKind::kHme;
  std::string label;
  EstimatorKind estimator = EstimatorKind::kMinMax;
  UpdateMode update = UpdateMode::kOverwrite;
  EpsilonGreedyParams egreedy;
  BefParams bef;
  /// Flip probability the learning policies assume when they score pairs.
  /// The oracle always uses the environment's.
  double planning_flip_prob = 0.0;
};

void validate(const PolicySpec& spec);

/// What a policy may know about the problem it is run on.
struct PolicyContext {
  std::size_t worker_count = 0;
  std::size_t skill_dims = 0;
  FeedbackModel feedback;
  std::size_t total_assignments = 0;
  /// Read by the oracle only.
  std::span<const SkillVector> true_skills;
};

/// Pull counts and reward sums shared by every policy.
struct WorkerStats {
  std::vector<std::uint64_t> pulls;
  std::vector<double> reward_sum;
  std::uint64_t total_pulls = 0;

  double mean_reward(WorkerId worker) const;
};

/// mean + sqrt(2 ln(total) / pulls); +inf for an untried worker.
double ucb_index(double mean_reward, std::uint64_t total_pulls,
                 std::uint64_t pulls) noexcept;

class Policy {
 public:
  explicit Policy(std::size_t worker_count);
  virtual ~Policy() = default;

  Policy(const Policy&) = delete;
  Policy& operator=(const Policy&) = delete;

  /// Assigns workers to `tasks` (at most one task per worker, at most one
  /// worker per task). Requires 1 <= tasks.size() <= worker_count().
  AssignmentAction choose_block(std::span<const TaskSpec> tasks, Rng& rng);

  /// Records the ratings of one executed assignment.
  void observe(const TaskSpec& task, const RewardSample& sample);

  std::size_t worker_count() const noexcept { return stats_.pulls.size(); }
  const WorkerStats& stats() const noexcept { return stats_; }

 protected:
  virtual AssignmentAction do_choose(std::span<const TaskSpec> tasks,
                                     Rng& rng) = 0;
  virtual void on_observe(const TaskSpec& /*task*/,
                          const RewardSample& /*sample*/) {}

  /// Hungarian assignment of `tasks` minimising cost(worker, task index);
  /// costs must lie in [0, 1]. Missing columns are padded with cost 1.
  template <typename CostFn>
  AssignmentAction solve_block(std::span<const TaskSpec> tasks,
                               CostFn&& cost) const;

  /// tasks[j] goes to order[j].
  static AssignmentAction from_worker_order(std::span<const TaskSpec> tasks,
                                            std::span<const std::size_t> order);

 private:
  WorkerStats stats_;
};

/// Hungarian matching on true skills.
class OraclePolicy final : public Policy {
 public:
  OraclePolicy(std::vector<SkillVector> true_skills, FeedbackModel feedback);

 protected:
  AssignmentAction do_choose(std::span<const TaskSpec> tasks, Rng& rng) override;

 private:
  std::vector<SkillVector> skills_;
  FeedbackModel feedback_;
};

/// Base for policies that keep per-worker skill estimates.
class EstimatingPolicy : public Policy {
 public:
  EstimatingPolicy(const PolicySpec& spec, const PolicyContext& context);

  const SkillEstimator& estimator() const noexcept { return estimator_; }

 protected:
  void on_observe(const TaskSpec& task, const RewardSample& sample) override;
  /// Hungarian matching on the current point estimates.
  AssignmentAction match_on_estimates(std::span<const TaskSpec> tasks) const;
  double estimated_reward(WorkerId worker, const TaskSpec& task) const;

 private:
  SkillEstimator estimator_;
  FeedbackModel planning_;
};

/// Hungarian min-max estimation: plug the estimates into the oracle's matching.
class HmePolicy final : public EstimatingPolicy {
 public:
  using EstimatingPolicy::EstimatingPolicy;

 protected:
  AssignmentAction do_choose(std::span<const TaskSpec> tasks, Rng& rng) override;
};

/// With probability epsilon a uniformly random assignment, otherwise the HME
/// matching; epsilon is multiplied by the drop rate after every block.
class EpsilonGreedyPolicy final : public EstimatingPolicy {
 public:
  EpsilonGreedyPolicy(const PolicySpec& spec, const PolicyContext& context);

  double epsilon() const noexcept { return epsilon_; }
  std::uint64_t blocks_chosen() const noexcept { return blocks_; }

 protected:
  AssignmentAction do_choose(std::span<const TaskSpec> tasks, Rng& rng) override;

 private:
  double epsilon_;
  double drop_;
  std::uint64_t blocks_ = 0;
};

/// Per-worker UCB1 index, the same for every task.
class UcbPolicy final : public Policy {
 public:
  explicit UcbPolicy(std::size_t worker_count) : Policy(worker_count) {}

  double index(WorkerId worker) const;

 protected:
  AssignmentAction do_choose(std::span<const TaskSpec> tasks, Rng& rng) override;
};

/// Bounded epsilon-first: round-robin exploration until explore_fraction of
/// the budget is committed, then density-ordered greedy exploitation.
class BoundedEpsilonFirstPolicy final : public EstimatingPolicy {
 public:
  enum class Phase { kExplore, kExploit };

  BoundedEpsilonFirstPolicy(const PolicySpec& spec,
                            const PolicyContext& context);

  double budget() const noexcept { return budget_; }
  double explore_budget() const noexcept { return explore_budget_; }
  double spent() const noexcept { return spent_; }
  double remaining_budget() const noexcept { return budget_ - spent_; }
  double worker_cost(WorkerId worker) const;
  /// Estimated skill scalar over cost.
  double density(WorkerId worker) const;
  /// Phase of each pair in the last chosen action, in pair order.
  const std::vector<Phase>& last_phases() const noexcept { return phases_; }

 protected:
  AssignmentAction do_choose(std::span<const TaskSpec> tasks, Rng& rng) override;
  void on_observe(const TaskSpec& task, const RewardSample& sample) override;

 private:
  double budget_;
  double explore_budget_;
  std::vector<double> costs_;
  double spent_ = 0.0;
  std::size_t cursor_ = 0;
  std::vector<Phase> phases_;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::size_t worker_count) : Policy(worker_count) {}

 protected:
  AssignmentAction do_choose(std::span<const TaskSpec> tasks, Rng& rng) override;
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec,
                                    const PolicyContext& context);

}  // namespace skillmatch
