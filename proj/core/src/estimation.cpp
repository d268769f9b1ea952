#include "skillmatch/estimation.hpp"

#include <algorithm>
#include <string>

#include "skillmatch/error.hpp"

namespace skillmatch {

SkillIntervalEstimate SkillIntervalEstimate::initial(std::size_t dims) {
  return {std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0)};
}

AverageEstimate AverageEstimate::initial(std::size_t dims) {
  return {std::vector<double>(dims, 0.0), std::vector<std::uint64_t>(dims, 0)};
}

SkillIntervalEstimate minmax_update(const SkillIntervalEstimate& estimate,
                                    const TaskSpec& task,
                                    std::span<const std::uint8_t> ratings,
                                    UpdateMode mode) {
  const std::size_t dims = estimate.dims();
  if (task.dims() != dims) {
    throw ContractViolation("minmax_update: dimension mismatch");
  }
  if (ratings.size() != 1 && ratings.size() != dims) {
    throw ContractViolation("minmax_update: expected 1 or " +
                            std::to_string(dims) + " ratings, got " +
                            std::to_string(ratings.size()));
  }
  SkillIntervalEstimate next = estimate;
  for (std::size_t i = 0; i < dims; ++i) {
    const bool success = ratings[ratings.size() == 1 ? 0 : i] != 0;
    const double req = task.requirements[i].value();
    if (success) {
      next.lower[i] = mode == UpdateMode::kOverwrite
                          ? req
                          : std::max(next.lower[i], req);
    } else {
      next.upper[i] = mode == UpdateMode::kOverwrite
                          ? req
                          : std::min(next.upper[i], req);
    }
  }
  return next;
}

SkillEstimate minmax_point(const SkillIntervalEstimate& estimate) {
  SkillEstimate point;
  point.levels.resize(estimate.dims());
  for (std::size_t i = 0; i < estimate.dims(); ++i) {
    point.levels[i] = (estimate.lower[i] + estimate.upper[i]) / 2.0;
  }
  return point;
}

AverageEstimate average_update(const AverageEstimate& estimate,
                               double reward) {
  AverageEstimate next = estimate;
  for (std::size_t i = 0; i < next.dims(); ++i) {
    next.rating_sum[i] += reward;
    next.rating_count[i] += 1;
  }
  return next;
}

SkillEstimate average_point(const AverageEstimate& estimate) {
  SkillEstimate point;
  point.levels.resize(estimate.dims());
  for (std::size_t i = 0; i < estimate.dims(); ++i) {
    point.levels[i] =
        estimate.rating_count[i] == 0
            ? 0.5
            : estimate.rating_sum[i] /
                  static_cast<double>(estimate.rating_count[i]);
  }
  return point;
}

SkillEstimator::SkillEstimator(EstimatorKind kind, UpdateMode mode,
                               std::size_t workers, std::size_t dims)
    : kind_(kind), mode_(mode) {
  if (kind_ == EstimatorKind::kMinMax) {
    intervals_.assign(workers, SkillIntervalEstimate::initial(dims));
    points_.assign(workers, minmax_point(SkillIntervalEstimate::initial(dims)));
  } else {
    averages_.assign(workers, AverageEstimate::initial(dims));
    points_.assign(workers, average_point(AverageEstimate::initial(dims)));
  }
}

void SkillEstimator::check_worker(WorkerId worker) const {
  if (worker >= points_.size()) {
    throw ContractViolation("unknown worker id " + std::to_string(worker));
  }
}

void SkillEstimator::observe(const TaskSpec& task, const RewardSample& sample) {
  check_worker(sample.worker);
  const WorkerId w = sample.worker;
  if (kind_ == EstimatorKind::kMinMax) {
    intervals_[w] = minmax_update(intervals_[w], task, sample.ratings, mode_);
    points_[w] = minmax_point(intervals_[w]);
  } else {
    averages_[w] = average_update(averages_[w], sample.value());
    points_[w] = average_point(averages_[w]);
  }
}

const SkillEstimate& SkillEstimator::point(WorkerId worker) const {
  check_worker(worker);
  return points_[worker];
}

const SkillIntervalEstimate& SkillEstimator::interval(WorkerId worker) const {
  check_worker(worker);
  if (kind_ != EstimatorKind::kMinMax) {
    throw ContractViolation("estimator does not keep intervals");
  }
  return intervals_[worker];
}

const AverageEstimate& SkillEstimator::average(WorkerId worker) const {
  check_worker(worker);
  if (kind_ != EstimatorKind::kAverage) {
    throw ContractViolation("estimator does not keep rating averages");
  }
  return averages_[worker];
}

}  // namespace skillmatch
