#include "skillmatch/feedback.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "skillmatch/error.hpp"

namespace skillmatch {

namespace {

void check_dims(std::size_t skill_dims, const TaskSpec& task) {
  if (skill_dims != task.dims()) {
    throw ContractViolation("skill/requirement dimension mismatch: " +
                            std::to_string(skill_dims) + " vs " +
                            std::to_string(task.dims()));
  }
}

template <typename Meets>
double fraction_of_channels(std::size_t dims, RatingScope scope, Meets meets) {
  if (scope == RatingScope::kOverall) {
    for (std::size_t i = 0; i < dims; ++i) {
      if (!meets(i)) return 0.0;
    }
    return 1.0;
  }
  std::size_t met = 0;
  for (std::size_t i = 0; i < dims; ++i) met += meets(i) ? 1 : 0;
  return static_cast<double>(met) / static_cast<double>(dims);
}

}  // namespace

double RewardSample::value() const {
  if (ratings.empty()) return 0.0;
  const unsigned sum = std::accumulate(ratings.begin(), ratings.end(), 0u);
  return static_cast<double>(sum) / static_cast<double>(ratings.size());
}

void validate(const NoiseModel& noise) {
  if (!(noise.flip_prob >= 0.0 && noise.flip_prob <= 1.0)) {
    throw ConfigError("noise.flip_prob must lie in [0, 1]", "noise.flip_prob");
  }
}

bool qualifies(const SkillVector& skills, const TaskSpec& task) {
  check_dims(skills.dims(), task);
  for (std::size_t i = 0; i < skills.dims(); ++i) {
    if (skills.levels[i] < task.requirements[i]) return false;
  }
  return true;
}

std::vector<bool> qualified_skills(const SkillVector& skills,
                                   const TaskSpec& task) {
  check_dims(skills.dims(), task);
  std::vector<bool> result(skills.dims());
  for (std::size_t i = 0; i < skills.dims(); ++i) {
    result[i] = skills.levels[i] >= task.requirements[i];
  }
  return result;
}

bool estimate_meets(double estimate, Level requirement) noexcept {
  return estimate * Level::kMaxIndex + 1e-9 >=
         static_cast<double>(requirement.index());
}

double satisfied_fraction(const SkillVector& skills, const TaskSpec& task,
                          RatingScope scope) {
  check_dims(skills.dims(), task);
  return fraction_of_channels(skills.dims(), scope, [&](std::size_t i) {
    return skills.levels[i] >= task.requirements[i];
  });
}

double satisfied_fraction(const SkillEstimate& estimate, const TaskSpec& task,
                          RatingScope scope) {
  check_dims(estimate.dims(), task);
  return fraction_of_channels(estimate.dims(), scope, [&](std::size_t i) {
    return estimate_meets(estimate.levels[i], task.requirements[i]);
  });
}

double expected_reward(bool qualified, const NoiseModel& noise) noexcept {
  return qualified ? 1.0 - noise.flip_prob : noise.flip_prob;
}

namespace {

double mean_channel_reward(double fraction, const NoiseModel& noise) {
  return fraction * expected_reward(true, noise) +
         (1.0 - fraction) * expected_reward(false, noise);
}

}  // namespace

double expected_reward(const SkillVector& skills, const TaskSpec& task,
                       const FeedbackModel& feedback) {
  return mean_channel_reward(satisfied_fraction(skills, task, feedback.scope),
                             feedback.noise);
}

double expected_reward(const SkillEstimate& estimate, const TaskSpec& task,
                       const FeedbackModel& feedback) {
  return mean_channel_reward(
      satisfied_fraction(estimate, task, feedback.scope), feedback.noise);
}

RewardSample draw_reward(const Worker& worker, const TaskSpec& task,
                         const FeedbackModel& feedback, Rng& rng) {
  RewardSample sample{worker.id, task.id, {}};
  const auto& p = feedback.noise.flip_prob;
  if (feedback.scope == RatingScope::kOverall) {
    const bool ok = qualifies(worker.true_skills, task);
    sample.ratings.push_back(rng.bernoulli(ok ? 1.0 - p : p) ? 1 : 0);
    return sample;
  }
  const auto per_skill = qualified_skills(worker.true_skills, task);
  sample.ratings.reserve(per_skill.size());
  for (bool ok : per_skill) {
    sample.ratings.push_back(rng.bernoulli(ok ? 1.0 - p : p) ? 1 : 0);
  }
  return sample;
}

}  // namespace skillmatch
