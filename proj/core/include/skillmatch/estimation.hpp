#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skillmatch/domain.hpp"
#include "skillmatch/feedback.hpp"

namespace skillmatch {

enum class UpdateMode {
  kOverwrite,  // a rating replaces the bound with the requirement level
  kMonotone,   // bounds only tighten
};

enum class EstimatorKind {
  kMinMax,   // per-skill interval, midpoint estimate
  kAverage,  // running mean of ratings
};

/// Per-skill interval [lower, upper] believed to contain the true level.
/// Starts at [0, 1]. Under noisy overwrite updates lower may exceed upper;
/// the midpoint is still reported.
struct SkillIntervalEstimate {
  std::vector<double> lower;
  std::vector<double> upper;

  static SkillIntervalEstimate initial(std::size_t dims);
  std::size_t dims() const noexcept { return lower.size(); }
};

/// Running sum and count of ratings per skill dimension.
struct AverageEstimate {
  std::vector<double> rating_sum;
  std::vector<std::uint64_t> rating_count;

  static AverageEstimate initial(std::size_t dims);
  std::size_t dims() const noexcept { return rating_sum.size(); }
};

/// Applies per-dimension ratings. `ratings` has one entry per dimension, or a
/// single entry that is then used for all of them.
SkillIntervalEstimate minmax_update(const SkillIntervalEstimate& estimate,
                                    const TaskSpec& task,
                                    std::span<const std::uint8_t> ratings,
                                    UpdateMode mode);

/// Applies one rating to every skill dimension. Only a real bool binds here,
/// so rating arrays go to the overload above.
template <typename B>
  requires std::same_as<B, bool>
SkillIntervalEstimate minmax_update(const SkillIntervalEstimate& estimate,
                                    const TaskSpec& task, B success,
                                    UpdateMode mode) {
  const std::uint8_t rating[] = {static_cast<std::uint8_t>(success ? 1 : 0)};
  return minmax_update(estimate, task, std::span<const std::uint8_t>(rating),
                       mode);
}

SkillEstimate minmax_point(const SkillIntervalEstimate& estimate);

/// Adds one shared rating in [0, 1] to every dimension.
AverageEstimate average_update(const AverageEstimate& estimate, double reward);

/// Mean rating per dimension; 0.5 before any rating.
SkillEstimate average_point(const AverageEstimate& estimate);

/// Per-worker skill estimates behind one interface.
class SkillEstimator {
 public:
  SkillEstimator(EstimatorKind kind, UpdateMode mode, std::size_t workers,
                 std::size_t dims);

  EstimatorKind kind() const noexcept { return kind_; }
  std::size_t workers() const noexcept { return points_.size(); }

  void observe(const TaskSpec& task, const RewardSample& sample);
  const SkillEstimate& point(WorkerId worker) const;

  const SkillIntervalEstimate& interval(WorkerId worker) const;
  const AverageEstimate& average(WorkerId worker) const;

 private:
  void check_worker(WorkerId worker) const;

  EstimatorKind kind_;
  UpdateMode mode_;
  std::vector<SkillIntervalEstimate> intervals_;
  std::vector<AverageEstimate> averages_;
  std::vector<SkillEstimate> points_;
};

}  // namespace skillmatch
