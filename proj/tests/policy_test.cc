#include "skillmatch/policy.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "skillmatch/error.hpp"
#include "skillmatch/simulator.hpp"

namespace skillmatch {
namespace {

PolicySpec spec_of(PolicyKind kind) {
  PolicySpec s;
  s.kind = kind;
  s.label = default_label(kind);
  return s;
}

PolicyContext context_of(const ProblemInstance& inst,
                         const std::vector<SkillVector>& skills,
                         FeedbackModel fb = {}) {
  return PolicyContext{inst.workers.size(), inst.skill_dims, fb,
                       inst.tasks.size() / inst.workers.size() *
                           inst.workers.size(),
                       skills};
}

constexpr PolicyKind kAllKinds[] = {
    PolicyKind::kOracle, PolicyKind::kHme,  PolicyKind::kEpsilonGreedy,
    PolicyKind::kUcb,    PolicyKind::kBoundedEpsilonFirst, PolicyKind::kRandom};

TEST(PolicyKind, Names) {
  for (PolicyKind k : kAllKinds) EXPECT_EQ(parse_policy_kind(to_string(k)), k);
  EXPECT_FALSE(parse_policy_kind("greedy").has_value());
  EXPECT_EQ(default_label(PolicyKind::kEpsilonGreedy), "Epsilon Greedy");
}

TEST(PolicySpec, Validation) {
  auto key_of = [](PolicySpec s) {
    try {
      validate(s);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  PolicySpec s = spec_of(PolicyKind::kHme);
  EXPECT_EQ(key_of(s), "<none>");
  s.label = "";
  EXPECT_EQ(key_of(s), "policies");
  s = spec_of(PolicyKind::kEpsilonGreedy);
  s.egreedy.epsilon0 = 1.5;
  EXPECT_EQ(key_of(s), "policy.egreedy.epsilon0");
  s = spec_of(PolicyKind::kEpsilonGreedy);
  s.egreedy.drop = 0.0;
  EXPECT_EQ(key_of(s), "policy.egreedy.drop");
  s = spec_of(PolicyKind::kBoundedEpsilonFirst);
  s.bef.explore_fraction = -0.1;
  EXPECT_EQ(key_of(s), "policy.bef.explore_fraction");
  s = spec_of(PolicyKind::kBoundedEpsilonFirst);
  s.bef.cost = 0.0;
  EXPECT_EQ(key_of(s), "policy.bef.cost");
}

TEST(Policies, ChooseBlockIsBipartite) {
  Rng rng(3);
  for (PolicyKind kind : kAllKinds) {
    const auto inst = generate_instance(6, 60, 3, 21);
    const auto skills = inst.true_skills();
    auto policy = make_policy(spec_of(kind), context_of(inst, skills));
    const std::span<const TaskSpec> tasks(inst.tasks);
    for (std::size_t b = 0; b < 10; ++b) {
      const std::size_t size = 1 + (b % 6);
      const auto block = tasks.subspan(b * 6, size);
      const auto action = policy->choose_block(block, rng);
      EXPECT_TRUE(is_valid(action, MatchingMode::kBlock)) << to_string(kind);
      for (const auto& pair : action.pairs) {
        EXPECT_LT(pair.worker, 6u);
        EXPECT_TRUE(std::any_of(block.begin(), block.end(), [&](const TaskSpec& t) {
          return t.id == pair.task;
        }));
      }
      if (kind != PolicyKind::kBoundedEpsilonFirst) {
        EXPECT_EQ(action.pairs.size(), size);
      }
      for (const auto& pair : action.pairs) {
        policy->observe(inst.tasks[pair.task],
                        draw_reward(inst.workers[pair.worker],
                                    inst.tasks[pair.task], FeedbackModel{}, rng));
      }
    }
  }
}

TEST(Policies, RejectsBadBlocks) {
  const auto inst = generate_instance(3, 9, 2, 1);
  const auto skills = inst.true_skills();
  Rng rng(1);
  for (PolicyKind kind : kAllKinds) {
    auto policy = make_policy(spec_of(kind), context_of(inst, skills));
    EXPECT_THROW(policy->choose_block({}, rng), ContractViolation);
    EXPECT_THROW(policy->choose_block(std::span(inst.tasks).first(4), rng),
                 ContractViolation);
    EXPECT_THROW(policy->observe(inst.tasks[0], RewardSample{3, 0, {1, 1}}),
                 ContractViolation);
  }
}

TEST(Policies, OracleNeedsTrueSkills) {
  const auto inst = generate_instance(3, 9, 2, 1);
  PolicyContext ctx = context_of(inst, {});
  EXPECT_THROW(make_policy(spec_of(PolicyKind::kOracle), ctx), ContractViolation);
}

TEST(Oracle, QualifiedMatchingWhenOneExists) {
  // Worker i has level i/5 on both skills; task j requires the same.
  ProblemInstance inst;
  inst.skill_dims = 2;
  for (int i = 0; i < 6; ++i) {
    inst.workers.push_back({std::size_t(i), SkillVector{{Level::from_index(i), Level::from_index(i)}}});
  }
  for (int j = 5; j >= 0; --j) {
    inst.tasks.push_back({std::size_t(5 - j), {Level::from_index(j), Level::from_index(j)}});
  }
  const FeedbackModel fb{NoiseModel{0.0}, RatingScope::kOverall};
  const auto skills = inst.true_skills();
  auto oracle = make_policy(spec_of(PolicyKind::kOracle), context_of(inst, skills, fb));
  Rng rng(1);
  const auto action = oracle->choose_block(inst.tasks, rng);
  ASSERT_EQ(action.pairs.size(), 6u);
  for (const auto& p : action.pairs) {
    EXPECT_TRUE(qualifies(inst.workers[p.worker].true_skills, inst.tasks[p.task]));
  }
}

TEST(Oracle, MaximisesExpectedReward) {
  Rng rng(44);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const auto inst = generate_instance(n, n, 3, 1000 + trial);
    const auto skills = inst.true_skills();
    const FeedbackModel fb{NoiseModel{0.15},
                           trial % 2 ? RatingScope::kOverall : RatingScope::kPerSkill};
    auto oracle = make_policy(spec_of(PolicyKind::kOracle), context_of(inst, skills, fb));
    const auto action = oracle->choose_block(inst.tasks, rng);
    double got = 0;
    for (const auto& p : action.pairs) {
      got += expected_reward(skills[p.worker], inst.tasks[p.task], fb);
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = 0;
    do {
      double r = 0;
      for (std::size_t w = 0; w < n; ++w) {
        r += expected_reward(skills[w], inst.tasks[perm[w]], fb);
      }
      best = std::max(best, r);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(got, best, 1e-12);
  }
}

TEST(Hme, ObserveSuccessSetsLowerBounds) {
  const auto inst = generate_instance(2, 2, 3, 1);
  const auto skills = inst.true_skills();
  HmePolicy hme(spec_of(PolicyKind::kHme), context_of(inst, skills));
  const auto t = TaskSpec::from_values(0, {0.6, 0.2, 0.4});
  hme.observe(t, RewardSample{1, 0, {1, 1, 1}});
  EXPECT_EQ(hme.estimator().interval(1).lower, (std::vector<double>{0.6, 0.2, 0.4}));
  EXPECT_EQ(hme.stats().pulls[1], 1u);
  EXPECT_EQ(hme.stats().total_pulls, 1u);
}

TEST(Hme, PrefersKnownGoodWorker) {
  ProblemInstance inst = generate_instance(2, 2, 1, 1);
  const auto skills = inst.true_skills();
  const FeedbackModel fb{NoiseModel{0.0}, RatingScope::kPerSkill};
  HmePolicy hme(spec_of(PolicyKind::kHme), context_of(inst, skills, fb));
  hme.observe(TaskSpec::from_values(0, {0.8}), RewardSample{1, 0, {1}});
  hme.observe(TaskSpec::from_values(1, {0.4}), RewardSample{0, 1, {0}});
  const std::vector<TaskSpec> block = {TaskSpec::from_values(5, {0.8}),
                                       TaskSpec::from_values(6, {0.0})};
  Rng rng(1);
  const auto a = hme.choose_block(block, rng);
  for (const auto& p : a.pairs) EXPECT_EQ(p.worker, p.task == 5 ? 1u : 0u);
}

TEST(WorkerStats, Counters) {
  UcbPolicy ucb(3);
  ucb.observe(TaskSpec::from_values(0, {0.2}), RewardSample{2, 0, {1}});
  ucb.observe(TaskSpec::from_values(0, {0.2}), RewardSample{2, 0, {0}});
  ucb.observe(TaskSpec::from_values(0, {0.2}), RewardSample{0, 0, {1}});
  EXPECT_EQ(ucb.stats().pulls, (std::vector<std::uint64_t>{1, 0, 2}));
  EXPECT_EQ(ucb.stats().total_pulls, 3u);
  EXPECT_DOUBLE_EQ(ucb.stats().mean_reward(2), 0.5);
  const auto& s = ucb.stats();
  EXPECT_EQ(std::accumulate(s.pulls.begin(), s.pulls.end(), std::uint64_t{0}),
            s.total_pulls);
}

TEST(Ucb, IndexFormula) {
  EXPECT_NEAR(ucb_index(0.5, 100, 10), 1.4597, 5e-5);
  EXPECT_DOUBLE_EQ(ucb_index(0.5, 100, 10), 0.5 + std::sqrt(2 * std::log(100.0) / 10));
  EXPECT_EQ(ucb_index(0.0, 5, 0), std::numeric_limits<double>::infinity());
}

TEST(Ucb, UntriedWorkersFirstThenHighestIndex) {
  UcbPolicy ucb(3);
  Rng rng(1);
  const std::vector<TaskSpec> one = {TaskSpec::from_values(0, {0.2})};
  std::vector<std::size_t> picks;
  for (int i = 0; i < 3; ++i) {
    const auto a = ucb.choose_block(one, rng);
    picks.push_back(a.pairs[0].worker);
    ucb.observe(one[0], RewardSample{a.pairs[0].worker, 0,
                                     {std::uint8_t(a.pairs[0].worker == 1)}});
  }
  EXPECT_EQ(picks, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(ucb.choose_block(one, rng).pairs[0].worker, 1u);
}

TEST(Ucb, BlockGoesToTopIndices) {
  UcbPolicy ucb(4);
  const auto t = TaskSpec::from_values(0, {0.2});
  for (std::size_t w = 0; w < 4; ++w) {
    for (int k = 0; k < 5; ++k) ucb.observe(t, RewardSample{w, 0, {std::uint8_t(w >= 2 || k == 0)}});
  }
  Rng rng(1);
  const std::vector<TaskSpec> block = {TaskSpec::from_values(0, {0.2}),
                                       TaskSpec::from_values(1, {0.4})};
  auto a = ucb.choose_block(block, rng);
  std::vector<std::size_t> ws;
  for (const auto& p : a.pairs) ws.push_back(p.worker);
  std::sort(ws.begin(), ws.end());
  EXPECT_EQ(ws, (std::vector<std::size_t>{2, 3}));
}

TEST(EpsilonGreedy, DecaySchedule) {
  const auto inst = generate_instance(5, 200, 3, 2);
  const auto skills = inst.true_skills();
  PolicySpec s = spec_of(PolicyKind::kEpsilonGreedy);
  s.egreedy = {0.3, 0.95};
  EpsilonGreedyPolicy eg(s, context_of(inst, skills));
  Rng rng(5);
  double prev = eg.epsilon();
  EXPECT_DOUBLE_EQ(prev, 0.3);
  for (std::size_t k = 1; k <= 40; ++k) {
    eg.choose_block(std::span(inst.tasks).subspan((k - 1) * 5, 5), rng);
    EXPECT_EQ(eg.blocks_chosen(), k);
    EXPECT_LE(eg.epsilon(), prev);
    EXPECT_NEAR(eg.epsilon(), 0.3 * std::pow(0.95, double(k)), 1e-12);
    prev = eg.epsilon();
  }
}

TEST(EpsilonGreedy, ZeroEpsilonMatchesHme) {
  const auto inst = generate_instance(8, 400, 3, 9);
  const auto skills = inst.true_skills();
  PolicySpec s = spec_of(PolicyKind::kEpsilonGreedy);
  s.egreedy.epsilon0 = 0.0;
  EpsilonGreedyPolicy eg(s, context_of(inst, skills));
  HmePolicy hme(spec_of(PolicyKind::kHme), context_of(inst, skills));
  const FeedbackModel fb;
  const auto a = run_simulation(inst, eg, fb, MatchingMode::kBlock, 77);
  const auto b = run_simulation(inst, hme, fb, MatchingMode::kBlock, 77);
  ASSERT_EQ(a.blocks.size(), b.blocks.size());
  for (std::size_t k = 0; k < a.blocks.size(); ++k) {
    EXPECT_EQ(a.blocks[k].action.pairs, b.blocks[k].action.pairs);
  }
  EXPECT_EQ(a.total_reward(), b.total_reward());
}

TEST(EpsilonGreedy, FullEpsilonIsRandom) {
  const auto inst = generate_instance(4, 4, 1, 9);
  const auto skills = inst.true_skills();
  PolicySpec s = spec_of(PolicyKind::kEpsilonGreedy);
  s.egreedy = {1.0, 1.0};
  EpsilonGreedyPolicy eg(s, context_of(inst, skills));
  Rng rng(2);
  std::vector<int> first(4, 0);
  for (int i = 0; i < 4000; ++i) {
    const auto a = eg.choose_block(inst.tasks, rng);
    for (const auto& p : a.pairs) {
      if (p.task == 0) ++first[p.worker];
    }
  }
  for (int c : first) EXPECT_NEAR(c / 4000.0, 0.25, 0.03);
}

TEST(Bef, BudgetDecreasesByCost) {
  const auto inst = generate_instance(3, 30, 2, 4);
  const auto skills = inst.true_skills();
  BoundedEpsilonFirstPolicy bef(spec_of(PolicyKind::kBoundedEpsilonFirst),
                                context_of(inst, skills));
  EXPECT_DOUBLE_EQ(bef.budget(), 30.0);
  EXPECT_DOUBLE_EQ(bef.explore_budget(), 3.0);
  for (int i = 0; i < 5; ++i) {
    const double before = bef.remaining_budget();
    bef.observe(inst.tasks[0], RewardSample{std::size_t(i % 3), 0, {1, 0}});
    EXPECT_DOUBLE_EQ(bef.remaining_budget(), before - 1.0);
  }
}

TEST(Bef, PhaseBoundary) {
  const auto inst = generate_instance(10, 300, 3, 6);
  const auto skills = inst.true_skills();
  PolicySpec s = spec_of(PolicyKind::kBoundedEpsilonFirst);
  s.bef.explore_fraction = 0.25;  // 75 exploration slots, mid-block
  BoundedEpsilonFirstPolicy bef(s, context_of(inst, skills));
  Rng rng(1);
  const FeedbackModel fb;
  std::size_t explored = 0;
  bool exploiting = false;
  std::vector<std::size_t> explore_workers;
  for (std::size_t b = 0; b < 30; ++b) {
    const auto block = std::span(inst.tasks).subspan(b * 10, 10);
    const double spent_before = bef.spent();
    const auto a = bef.choose_block(block, rng);
    const auto& phases = bef.last_phases();
    ASSERT_EQ(phases.size(), a.pairs.size());
    double committed = spent_before;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      if (phases[i] == BoundedEpsilonFirstPolicy::Phase::kExplore) {
        EXPECT_FALSE(exploiting);
        EXPECT_LT(committed, bef.explore_budget());
        explore_workers.push_back(a.pairs[i].worker);
        ++explored;
      } else {
        exploiting = true;
        EXPECT_GE(committed, bef.explore_budget());
      }
      committed += 1.0;
    }
    for (const auto& p : a.pairs) {
      bef.observe(inst.tasks[p.task],
                  draw_reward(inst.workers[p.worker], inst.tasks[p.task], fb, rng));
    }
  }
  EXPECT_EQ(explored, 75u);
  for (std::size_t i = 0; i < explore_workers.size(); ++i) {
    EXPECT_EQ(explore_workers[i], i % 10);
  }
  EXPECT_DOUBLE_EQ(bef.remaining_budget(), 0.0);
}

TEST(Bef, StopsWhenBudgetSpent) {
  const auto inst = generate_instance(4, 40, 2, 6);
  const auto skills = inst.true_skills();
  PolicySpec s = spec_of(PolicyKind::kBoundedEpsilonFirst);
  s.bef.budget = 6.0;
  BoundedEpsilonFirstPolicy bef(s, context_of(inst, skills));
  const auto trace = run_simulation(inst, bef, FeedbackModel{}, MatchingMode::kBlock, 3);
  EXPECT_EQ(trace.assignments(), 6u);
  EXPECT_EQ(trace.blocks.size(), 10u);
  EXPECT_TRUE(trace.blocks.back().action.pairs.empty());
}

TEST(Bef, DensityUsesCosts) {
  const auto inst = generate_instance(2, 2, 1, 6);
  const auto skills = inst.true_skills();
  PolicySpec s = spec_of(PolicyKind::kBoundedEpsilonFirst);
  s.bef.explore_fraction = 0.0;
  s.bef.budget = 100.0;
  s.bef.worker_costs = {1.0, 4.0};
  BoundedEpsilonFirstPolicy bef(s, context_of(inst, skills));
  EXPECT_DOUBLE_EQ(bef.density(0), 0.5);
  EXPECT_DOUBLE_EQ(bef.density(1), 0.125);
  // Worker 1 is much better, but costs four times as much.
  bef.observe(TaskSpec::from_values(0, {0.8}), RewardSample{1, 0, {1}});
  EXPECT_DOUBLE_EQ(bef.density(1), 0.9 / 4.0);
  Rng rng(1);
  const std::vector<TaskSpec> one = {TaskSpec::from_values(0, {0.2})};
  EXPECT_EQ(bef.choose_block(one, rng).pairs[0].worker, 0u);
  s.bef.worker_costs = {1.0};
  EXPECT_THROW(BoundedEpsilonFirstPolicy(s, context_of(inst, skills)), ConfigError);
}

TEST(Bef, ExploitPicksBestTaskForTopWorker) {
  const auto inst = generate_instance(2, 2, 1, 6);
  const auto skills = inst.true_skills();
  PolicySpec s = spec_of(PolicyKind::kBoundedEpsilonFirst);
  s.bef.explore_fraction = 0.0;
  s.bef.budget = 100.0;
  BoundedEpsilonFirstPolicy bef(s, context_of(inst, skills));
  bef.observe(TaskSpec::from_values(0, {0.6}), RewardSample{0, 0, {0}});  // 0.3
  bef.observe(TaskSpec::from_values(0, {0.8}), RewardSample{1, 0, {1}});  // 0.9
  Rng rng(1);
  // Worker 1 goes first and skips the task it is not estimated to meet.
  const std::vector<TaskSpec> block = {TaskSpec::from_values(7, {1.0}),
                                       TaskSpec::from_values(8, {0.8})};
  const auto a = bef.choose_block(block, rng);
  ASSERT_EQ(a.pairs.size(), 2u);
  EXPECT_EQ(a.pairs[0].worker, 1u);
  for (const auto& p : a.pairs) EXPECT_EQ(p.worker, p.task == 8 ? 1u : 0u);
  for (auto ph : bef.last_phases()) EXPECT_EQ(ph, BoundedEpsilonFirstPolicy::Phase::kExploit);
}

TEST(Random, UniformOverWorkers) {
  RandomPolicy random(5);
  Rng rng(8);
  const std::vector<TaskSpec> one = {TaskSpec::from_values(0, {0.2})};
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 10000; ++i) ++counts[random.choose_block(one, rng).pairs[0].worker];
  for (int c : counts) EXPECT_NEAR(c / 10000.0, 0.2, 0.015);
}

}  // namespace
}  // namespace skillmatch
