#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "skillmatch/random.hpp"

namespace skillmatch {

/// A skill or requirement level on the six-point grid {0.0, 0.2, ..., 1.0},
/// stored as its grid index so that level comparisons are exact.
class Level {
 public:
  static constexpr int kMaxIndex = 5;
  static constexpr int kCount = kMaxIndex + 1;

  constexpr Level() = default;

  static Level from_index(int index);
  /// Accepts only values within 1e-9 of a grid point.
  static Level from_value(double value);

  constexpr int index() const noexcept { return index_; }
  constexpr double value() const noexcept {
    return static_cast<double>(index_) / kMaxIndex;
  }

  friend constexpr auto operator<=>(Level, Level) = default;

 private:
  explicit constexpr Level(std::uint8_t index) : index_(index) {}
  std::uint8_t index_ = 0;
};

using WorkerId = std::size_t;
using TaskId = std::size_t;

/// True per-skill levels of one worker.
struct SkillVector {
  std::vector<Level> levels;

  static SkillVector from_values(std::initializer_list<double> values);
  std::size_t dims() const noexcept { return levels.size(); }
  friend bool operator==(const SkillVector&, const SkillVector&) = default;
};

/// Point estimate of a worker's skills; entries lie in [0, 1] but need not be
/// grid values (interval midpoints, rating averages).
struct SkillEstimate {
  std::vector<double> levels;

  std::size_t dims() const noexcept { return levels.size(); }
  /// Mean over skill dimensions; used where a policy needs one number.
  double scalar() const;
};

struct TaskSpec {
  TaskId id = 0;
  std::vector<Level> requirements;

  static TaskSpec from_values(TaskId id, std::initializer_list<double> values);
  std::size_t dims() const noexcept { return requirements.size(); }
  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct Worker {
  WorkerId id = 0;
  SkillVector true_skills;
  friend bool operator==(const Worker&, const Worker&) = default;
};

struct Assignment {
  WorkerId worker = 0;
  TaskId task = 0;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class MatchingMode {
  kBlock,         // each worker and each task at most once per action
  kUnrestricted,  // each task at most once; workers may repeat
};

struct AssignmentAction {
  std::vector<Assignment> pairs;
};

bool is_valid(const AssignmentAction& action, MatchingMode mode);

/// Workers and tasks with dense ids 0..n-1 (id == position).
struct ProblemInstance {
  std::vector<Worker> workers;
  std::vector<TaskSpec> tasks;
  std::size_t skill_dims = 0;

  std::vector<SkillVector> true_skills() const;
};

/// Samples every skill and requirement level uniformly from the grid.
/// Workers and tasks come from separate substreams of `seed`.
ProblemInstance generate_instance(std::size_t worker_count,
                                  std::size_t task_count,
                                  std::size_t skill_dims, Rng::Seed seed);

/// Same tasks, freshly sampled workers.
ProblemInstance regenerate_workers(const ProblemInstance& instance,
                                   Rng::Seed seed);

/// Order-sensitive hash of every level in the instance.
std::uint64_t fingerprint(const ProblemInstance& instance);

}  // namespace skillmatch
