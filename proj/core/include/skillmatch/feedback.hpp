#pragma once

#include <cstdint>
#include <vector>

#include "skillmatch/domain.hpp"
#include "skillmatch/random.hpp"

namespace skillmatch {

/// Probability that a rating contradicts the worker's true qualification.
struct NoiseModel {
  double flip_prob = 0.15;
};

/// What one rating covers.
enum class RatingScope {
  kPerSkill,  // one binary rating per skill dimension
  kOverall,   // a single binary rating for the whole task
};

struct FeedbackModel {
  NoiseModel noise;
  RatingScope scope = RatingScope::kPerSkill;

  /// Number of binary ratings one assignment produces.
  std::size_t channels(std::size_t skill_dims) const noexcept {
    return scope == RatingScope::kPerSkill ? skill_dims : 1;
  }
};

/// One executed (worker, task) assignment and the ratings it earned.
struct RewardSample {
  WorkerId worker = 0;
  TaskId task = 0;
  std::vector<std::uint8_t> ratings;  // each 0 or 1

  /// Mean rating, in [0, 1]; binary whenever there is a single channel.
  double value() const;
};

/// Componentwise dominance: every skill meets its requirement.
bool qualifies(const SkillVector& skills, const TaskSpec& task);

/// Per-dimension version of `qualifies`.
std::vector<bool> qualified_skills(const SkillVector& skills,
                                   const TaskSpec& task);

/// An estimated level meets a grid requirement; the comparison is done in
/// grid units with a 1e-9 allowance for rounding in midpoints and averages.
bool estimate_meets(double estimate, Level requirement) noexcept;

/// Fraction of rating channels whose qualification test passes.
double satisfied_fraction(const SkillVector& skills, const TaskSpec& task,
                          RatingScope scope);
double satisfied_fraction(const SkillEstimate& estimate, const TaskSpec& task,
                          RatingScope scope);

/// Expected value of one binary rating.
double expected_reward(bool qualified, const NoiseModel& noise) noexcept;

/// Expected mean rating of assigning a worker with these skills to the task.
double expected_reward(const SkillVector& skills, const TaskSpec& task,
                       const FeedbackModel& feedback);
double expected_reward(const SkillEstimate& estimate, const TaskSpec& task,
                       const FeedbackModel& feedback);

/// Draws one rating per channel: Bernoulli(1 - p) where the channel is
/// qualified, Bernoulli(p) otherwise. Channels consume one uniform each, in
/// dimension order.
RewardSample draw_reward(const Worker& worker, const TaskSpec& task,
                         const FeedbackModel& feedback, Rng& rng);

void validate(const NoiseModel& noise);

}  // namespace skillmatch
