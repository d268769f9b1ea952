#include "skillmatch/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "skillmatch/error.hpp"

namespace skillmatch {

std::string_view to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::kOracle: return "oracle";
    case PolicyKind::kHme: return "hme";
    case PolicyKind::kEpsilonGreedy: return "egreedy";
    case PolicyKind::kUcb: return "ucb";
    case PolicyKind::kBoundedEpsilonFirst: return "bef";
    case PolicyKind::kRandom: return "random";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) noexcept {
  for (auto kind : {PolicyKind::kOracle, PolicyKind::kHme,
                    PolicyKind::kEpsilonGreedy, PolicyKind::kUcb,
                    PolicyKind::kBoundedEpsilonFirst, PolicyKind::kRandom}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string default_label(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kOracle: return "Oracle";
    case PolicyKind::kHme: return "HME";
    case PolicyKind::kEpsilonGreedy: return "Epsilon Greedy";
    case PolicyKind::kUcb: return "UCB";
    case PolicyKind::kBoundedEpsilonFirst: return "BEF";
    case PolicyKind::kRandom: return "Random";
  }
  return "?";
}

void validate(const PolicySpec& spec) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (spec.label.empty()) {
    throw ConfigError("policy label must not be empty", "policies");
  }
  if (!in_unit(spec.egreedy.epsilon0)) {
    throw ConfigError("policy.egreedy.epsilon0 must lie in [0, 1]",
                      "policy.egreedy.epsilon0");
  }
  if (!(spec.egreedy.drop > 0.0 && spec.egreedy.drop <= 1.0)) {
    throw ConfigError("policy.egreedy.drop must lie in (0, 1]",
                      "policy.egreedy.drop");
  }
  if (!in_unit(spec.bef.explore_fraction)) {
    throw ConfigError("policy.bef.explore_fraction must lie in [0, 1]",
                      "policy.bef.explore_fraction");
  }
  if (spec.bef.budget && !(*spec.bef.budget >= 0.0 &&
                           std::isfinite(*spec.bef.budget))) {
    throw ConfigError("policy.bef.budget must be finite and >= 0",
                      "policy.bef.budget");
  }
  if (!(spec.bef.cost > 0.0 && std::isfinite(spec.bef.cost))) {
    throw ConfigError("policy.bef.cost must be > 0", "policy.bef.cost");
  }
  for (double c : spec.bef.worker_costs) {
    if (!(c > 0.0 && std::isfinite(c))) {
      throw ConfigError("policy.bef.cost entries must be > 0",
                        "policy.bef.cost");
    }
  }
  if (!in_unit(spec.planning_flip_prob)) {
    throw ConfigError("policy.planning_flip_prob must lie in [0, 1]",
                      "policy.planning_flip_prob");
  }
}

double WorkerStats::mean_reward(WorkerId worker) const {
  return pulls.at(worker) == 0
             ? 0.0
             : reward_sum[worker] / static_cast<double>(pulls[worker]);
}

double ucb_index(double mean_reward, std::uint64_t total_pulls,
                 std::uint64_t pulls) noexcept {
  if (pulls == 0) return std::numeric_limits<double>::infinity();
  return mean_reward + std::sqrt(2.0 * std::log(static_cast<double>(total_pulls)) /
                                 static_cast<double>(pulls));
}

// ---------------------------------------------------------------------------

Policy::Policy(std::size_t worker_count) {
  if (worker_count == 0) throw ContractViolation("policy needs workers");
  stats_.pulls.assign(worker_count, 0);
  stats_.reward_sum.assign(worker_count, 0.0);
}

AssignmentAction Policy::choose_block(std::span<const TaskSpec> tasks,
                                      Rng& rng) {
  if (tasks.empty()) throw ContractViolation("choose_block: empty block");
  if (tasks.size() > worker_count()) {
    throw ContractViolation("choose_block: " + std::to_string(tasks.size()) +
                            " tasks for " + std::to_string(worker_count()) +
                            " workers");
  }
  return do_choose(tasks, rng);
}

void Policy::observe(const TaskSpec& task, const RewardSample& sample) {
  if (sample.worker >= worker_count()) {
    throw ContractViolation("observe: unknown worker id " +
                            std::to_string(sample.worker));
  }
  const double value = sample.value();
  stats_.pulls[sample.worker] += 1;
  stats_.reward_sum[sample.worker] += value;
  stats_.total_pulls += 1;
  on_observe(task, sample);
}

template <typename CostFn>
AssignmentAction Policy::solve_block(std::span<const TaskSpec> tasks,
                                     CostFn&& cost) const {
  const std::size_t n = worker_count();
  const std::size_t k = tasks.size();
  std::vector<double> entries;
  entries.reserve(n * k);
  for (std::size_t w = 0; w < n; ++w) {
    for (std::size_t j = 0; j < k; ++j) entries.push_back(cost(w, j));
  }
  const Matching matching =
      solve(k == n ? CostMatrix(n, std::move(entries))
                   : CostMatrix::padded(n, k, entries, 1.0));
  std::vector<std::size_t> worker_of_task(k);
  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t col = matching.column_of_row[w];
    if (col < k) worker_of_task[col] = w;
  }
  return from_worker_order(tasks, worker_of_task);
}

AssignmentAction Policy::from_worker_order(std::span<const TaskSpec> tasks,
                                           std::span<const std::size_t> order) {
  AssignmentAction action;
  action.pairs.reserve(tasks.size());
  for (std::size_t j = 0; j < tasks.size(); ++j) {
    action.pairs.push_back({order[j], tasks[j].id});
  }
  return action;
}

// ---------------------------------------------------------------------------

OraclePolicy::OraclePolicy(std::vector<SkillVector> true_skills,
                           FeedbackModel feedback)
    : Policy(true_skills.size()),
      skills_(std::move(true_skills)),
      feedback_(feedback) {}

AssignmentAction OraclePolicy::do_choose(std::span<const TaskSpec> tasks,
                                         Rng& /*rng*/) {
  return solve_block(tasks, [&](std::size_t w, std::size_t j) {
    return 1.0 - expected_reward(skills_[w], tasks[j], feedback_);
  });
}

// ---------------------------------------------------------------------------

EstimatingPolicy::EstimatingPolicy(const PolicySpec& spec,
                                   const PolicyContext& context)
    : Policy(context.worker_count),
      estimator_(spec.estimator, spec.update, context.worker_count,
                 context.skill_dims),
      planning_{NoiseModel{spec.planning_flip_prob}, context.feedback.scope} {}

void EstimatingPolicy::on_observe(const TaskSpec& task,
                                  const RewardSample& sample) {
  estimator_.observe(task, sample);
}

double EstimatingPolicy::estimated_reward(WorkerId worker,
                                          const TaskSpec& task) const {
  return expected_reward(estimator_.point(worker), task, planning_);
}

AssignmentAction EstimatingPolicy::match_on_estimates(
    std::span<const TaskSpec> tasks) const {
  return solve_block(tasks, [&](std::size_t w, std::size_t j) {
    return 1.0 - estimated_reward(w, tasks[j]);
  });
}

AssignmentAction HmePolicy::do_choose(std::span<const TaskSpec> tasks,
                                      Rng& /*rng*/) {
  return match_on_estimates(tasks);
}

EpsilonGreedyPolicy::EpsilonGreedyPolicy(const PolicySpec& spec,
                                         const PolicyContext& context)
    : EstimatingPolicy(spec, context),
      epsilon_(spec.egreedy.epsilon0),
      drop_(spec.egreedy.drop) {}

AssignmentAction EpsilonGreedyPolicy::do_choose(std::span<const TaskSpec> tasks,
                                                Rng& rng) {
  const bool explore = rng.uniform01() < epsilon_;
  AssignmentAction action =
      explore ? from_worker_order(tasks, rng.permutation(worker_count()))
              : match_on_estimates(tasks);
  epsilon_ *= drop_;
  ++blocks_;
  return action;
}

// ---------------------------------------------------------------------------

double UcbPolicy::index(WorkerId worker) const {
  return ucb_index(stats().mean_reward(worker), stats().total_pulls,
                   stats().pulls.at(worker));
}

AssignmentAction UcbPolicy::do_choose(std::span<const TaskSpec> tasks,
                                      Rng& /*rng*/) {
  // The index does not depend on the task, so only the order of the indices
  // matters. Costs are index ranks (best = 0, ties to the lower id), which
  // keeps untried workers' infinite indices finite in the matrix.
  const std::size_t n = worker_count();
  std::vector<std::size_t> by_index(n);
  std::iota(by_index.begin(), by_index.end(), std::size_t{0});
  std::vector<double> idx(n);
  for (std::size_t w = 0; w < n; ++w) idx[w] = index(w);
  std::stable_sort(by_index.begin(), by_index.end(),
                   [&](std::size_t a, std::size_t b) { return idx[a] > idx[b]; });
  std::vector<double> rank_cost(n);
  for (std::size_t r = 0; r < n; ++r) {
    rank_cost[by_index[r]] = static_cast<double>(r) / static_cast<double>(n);
  }
  return solve_block(tasks,
                     [&](std::size_t w, std::size_t) { return rank_cost[w]; });
}

// ---------------------------------------------------------------------------

BoundedEpsilonFirstPolicy::BoundedEpsilonFirstPolicy(
    const PolicySpec& spec, const PolicyContext& context)
    : EstimatingPolicy(spec, context),
      budget_(spec.bef.budget.value_or(
          static_cast<double>(context.total_assignments))),
      explore_budget_(spec.bef.explore_fraction * budget_) {
  if (!spec.bef.worker_costs.empty()) {
    if (spec.bef.worker_costs.size() != context.worker_count) {
      throw ConfigError("policy.bef.cost needs one entry per worker",
                        "policy.bef.cost");
    }
    costs_ = spec.bef.worker_costs;
  } else {
    costs_.assign(context.worker_count, spec.bef.cost);
  }
}

double BoundedEpsilonFirstPolicy::worker_cost(WorkerId worker) const {
  return costs_.at(worker);
}

double BoundedEpsilonFirstPolicy::density(WorkerId worker) const {
  return estimator().point(worker).scalar() / worker_cost(worker);
}

AssignmentAction BoundedEpsilonFirstPolicy::do_choose(
    std::span<const TaskSpec> tasks, Rng& /*rng*/) {
  const std::size_t n = worker_count();
  AssignmentAction action;
  phases_.clear();
  std::vector<char> busy(n, 0);
  double committed = spent_;
  std::size_t slot = 0;

  // Exploration: hand out tasks in block order to workers in cyclic order.
  for (; slot < tasks.size() && committed < explore_budget_; ++slot) {
    std::size_t w = cursor_ % n;
    while (busy[w]) w = (w + 1) % n;
    cursor_ = w + 1;
    busy[w] = 1;
    committed += costs_[w];
    action.pairs.push_back({w, tasks[slot].id});
    phases_.push_back(Phase::kExplore);
  }
  if (slot == tasks.size()) return action;

  // Exploitation: highest density first; each worker takes the open task it
  // is estimated to do best (earliest task on ties) while budget remains.
  std::vector<std::size_t> order;
  for (std::size_t w = 0; w < n; ++w) {
    if (!busy[w]) order.push_back(w);
  }
  std::vector<double> dens(n);
  for (std::size_t w : order) dens[w] = density(w);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dens[a] > dens[b];
  });
  std::vector<std::size_t> open;
  for (std::size_t j = slot; j < tasks.size(); ++j) open.push_back(j);
  for (std::size_t w : order) {
    if (open.empty()) break;
    if (committed + costs_[w] > budget_ + 1e-9) continue;
    auto best = open.begin();
    double best_reward = estimated_reward(w, tasks[*best]);
    for (auto it = std::next(open.begin()); it != open.end(); ++it) {
      const double r = estimated_reward(w, tasks[*it]);
      if (r > best_reward) {
        best_reward = r;
        best = it;
      }
    }
    action.pairs.push_back({w, tasks[*best].id});
    phases_.push_back(Phase::kExploit);
    committed += costs_[w];
    open.erase(best);
  }
  return action;
}

void BoundedEpsilonFirstPolicy::on_observe(const TaskSpec& task,
                                           const RewardSample& sample) {
  EstimatingPolicy::on_observe(task, sample);
  spent_ += costs_[sample.worker];
}

// ---------------------------------------------------------------------------

AssignmentAction RandomPolicy::do_choose(std::span<const TaskSpec> tasks,
                                         Rng& rng) {
  return from_worker_order(tasks, rng.permutation(worker_count()));
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec,
                                    const PolicyContext& context) {
  validate(spec);
  switch (spec.kind) {
    case PolicyKind::kOracle:
      if (context.true_skills.size() != context.worker_count) {
        throw ContractViolation("oracle needs the true skills of every worker");
      }
      return std::make_unique<OraclePolicy>(
          std::vector<SkillVector>(context.true_skills.begin(),
                                   context.true_skills.end()),
          context.feedback);
    case PolicyKind::kHme:
      return std::make_unique<HmePolicy>(spec, context);
    case PolicyKind::kEpsilonGreedy:
      return std::make_unique<EpsilonGreedyPolicy>(spec, context);
    case PolicyKind::kUcb:
      return std::make_unique<UcbPolicy>(context.worker_count);
    case PolicyKind::kBoundedEpsilonFirst:
      return std::make_unique<BoundedEpsilonFirstPolicy>(spec, context);
    case PolicyKind::kRandom:
      return std::make_unique<RandomPolicy>(context.worker_count);
  }
  throw ContractViolation("unknown policy kind");
}

}  // namespace skillmatch
