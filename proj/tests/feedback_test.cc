#include "skillmatch/feedback.hpp"

#include <gtest/gtest.h>

#include "skillmatch/error.hpp"

namespace skillmatch {
namespace {

FeedbackModel per_skill(double p) {
  return {NoiseModel{p}, RatingScope::kPerSkill};
}
FeedbackModel overall(double p) { return {NoiseModel{p}, RatingScope::kOverall}; }

TEST(Qualifies, Componentwise) {
  const auto s = SkillVector::from_values({0.6, 0.8, 0.2});
  EXPECT_TRUE(qualifies(s, TaskSpec::from_values(0, {0.4, 0.8, 0.2})));
  EXPECT_FALSE(qualifies(s, TaskSpec::from_values(0, {0.4, 0.8, 0.4})));
  EXPECT_TRUE(qualifies(s, TaskSpec::from_values(0, {0.0, 0.0, 0.0})));
  EXPECT_TRUE(qualifies(SkillVector::from_values({0.0, 0.0, 0.0}),
                        TaskSpec::from_values(0, {0.0, 0.0, 0.0})));
}

TEST(Qualifies, DimensionMismatch) {
  EXPECT_THROW(qualifies(SkillVector::from_values({0.2}),
                         TaskSpec::from_values(0, {0.2, 0.2})),
               ContractViolation);
}

TEST(Qualifies, PerSkill) {
  const auto q = qualified_skills(SkillVector::from_values({0.6, 0.8, 0.2}),
                                  TaskSpec::from_values(0, {0.4, 0.8, 0.4}));
  EXPECT_EQ(q, (std::vector<bool>{true, true, false}));
}

TEST(SatisfiedFraction, Scopes) {
  const auto s = SkillVector::from_values({0.6, 0.8, 0.2});
  const auto t = TaskSpec::from_values(0, {0.4, 0.8, 0.4});
  EXPECT_DOUBLE_EQ(satisfied_fraction(s, t, RatingScope::kPerSkill), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(satisfied_fraction(s, t, RatingScope::kOverall), 0.0);
  const SkillEstimate e{{0.5, 0.8, 0.3}};
  EXPECT_DOUBLE_EQ(satisfied_fraction(e, t, RatingScope::kPerSkill), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(satisfied_fraction(e, t, RatingScope::kOverall), 0.0);
  const SkillEstimate all{{0.5, 0.8, 0.7}};
  EXPECT_DOUBLE_EQ(satisfied_fraction(all, t, RatingScope::kPerSkill), 1.0);
  EXPECT_DOUBLE_EQ(satisfied_fraction(all, t, RatingScope::kOverall), 1.0);
}

TEST(EstimateMeets, GridTolerance) {
  EXPECT_TRUE(estimate_meets(0.6, Level::from_value(0.6)));
  EXPECT_TRUE(estimate_meets(0.2 + 0.4, Level::from_value(0.6)));
  EXPECT_TRUE(estimate_meets((0.4 + 0.8) / 2, Level::from_value(0.6)));
  EXPECT_FALSE(estimate_meets(0.59, Level::from_value(0.6)));
}

TEST(ExpectedReward, Bernoulli) {
  EXPECT_DOUBLE_EQ(expected_reward(true, NoiseModel{0.15}), 0.85);
  EXPECT_DOUBLE_EQ(expected_reward(false, NoiseModel{0.15}), 0.15);
  EXPECT_DOUBLE_EQ(expected_reward(true, NoiseModel{0.5}),
                   expected_reward(false, NoiseModel{0.5}));
}

TEST(ExpectedReward, Pairs) {
  const auto s = SkillVector::from_values({0.6, 0.8, 0.2});
  const auto t = TaskSpec::from_values(0, {0.4, 0.8, 0.4});
  EXPECT_DOUBLE_EQ(expected_reward(s, t, per_skill(0.15)),
                   (2 * 0.85 + 0.15) / 3);
  EXPECT_DOUBLE_EQ(expected_reward(s, t, overall(0.15)), 0.15);
}

TEST(DrawReward, Deterministic) {
  const Worker w{3, SkillVector::from_values({0.6, 0.8, 0.2})};
  const auto ok = TaskSpec::from_values(7, {0.4, 0.8, 0.2});
  const auto bad = TaskSpec::from_values(8, {1.0, 1.0, 1.0});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto a = draw_reward(w, ok, overall(0.0), rng);
    EXPECT_EQ(a.worker, 3u);
    EXPECT_EQ(a.task, 7u);
    EXPECT_EQ(a.ratings, (std::vector<std::uint8_t>{1}));
    EXPECT_EQ(draw_reward(w, bad, overall(0.0), rng).value(), 0.0);
    EXPECT_EQ(draw_reward(w, ok, per_skill(0.0), rng).value(), 1.0);
    EXPECT_EQ(draw_reward(w, bad, per_skill(0.0), rng).value(), 0.0);
    EXPECT_EQ(draw_reward(w, bad, per_skill(1.0), rng).value(), 1.0);
  }
}

TEST(DrawReward, NoisyMean) {
  const Worker w{0, SkillVector::from_values({1.0, 1.0, 1.0})};
  const auto t = TaskSpec::from_values(0, {0.2, 0.4, 0.6});
  Rng rng(2);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) sum += draw_reward(w, t, overall(0.15), rng).value();
  EXPECT_NEAR(sum / 10000, 0.85, 0.01);

  double per = 0;
  const Worker half{0, SkillVector::from_values({1.0, 0.0})};
  const auto t2 = TaskSpec::from_values(0, {0.4, 0.4});
  for (int i = 0; i < 10000; ++i) {
    const auto r = draw_reward(half, t2, per_skill(0.15), rng);
    ASSERT_EQ(r.ratings.size(), 2u);
    per += r.value();
  }
  EXPECT_NEAR(per / 10000, 0.5, 0.01);
}

TEST(DrawReward, SameStreamSameRatings) {
  const Worker w{0, SkillVector::from_values({0.4, 0.4, 0.4})};
  const auto t = TaskSpec::from_values(0, {0.2, 0.6, 0.4});
  Rng a(5), b(5);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(draw_reward(w, t, per_skill(0.3), a).ratings,
              draw_reward(w, t, per_skill(0.3), b).ratings);
  }
}

TEST(NoiseModel, Validation) {
  EXPECT_NO_THROW(validate(NoiseModel{0.0}));
  EXPECT_NO_THROW(validate(NoiseModel{1.0}));
  try {
    validate(NoiseModel{1.5});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "noise.flip_prob");
  }
  EXPECT_THROW(validate(NoiseModel{-0.1}), ConfigError);
}

}  // namespace
}  // namespace skillmatch
