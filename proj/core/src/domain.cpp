#include "skillmatch/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "skillmatch/error.hpp"

namespace skillmatch {

Level Level::from_index(int index) {
  if (index < 0 || index > kMaxIndex) {
    throw ContractViolation("level index out of range: " +
                            std::to_string(index));
  }
  return Level(static_cast<std::uint8_t>(index));
}

Level Level::from_value(double value) {
  const double scaled = value * kMaxIndex;
  const double nearest = std::round(scaled);
  if (!(std::abs(scaled - nearest) <= 1e-9) || nearest < 0 ||
      nearest > kMaxIndex) {
    throw ContractViolation("level is not on the six-point grid: " +
                            std::to_string(value));
  }
  return Level(static_cast<std::uint8_t>(nearest));
}

SkillVector SkillVector::from_values(std::initializer_list<double> values) {
  SkillVector skills;
  for (double v : values) skills.levels.push_back(Level::from_value(v));
  return skills;
}

double SkillEstimate::scalar() const {
  if (levels.empty()) return 0.0;
  return std::accumulate(levels.begin(), levels.end(), 0.0) /
         static_cast<double>(levels.size());
}

TaskSpec TaskSpec::from_values(TaskId id, std::initializer_list<double> values) {
  TaskSpec task{id, {}};
  for (double v : values) task.requirements.push_back(Level::from_value(v));
  return task;
}

bool is_valid(const AssignmentAction& action, MatchingMode mode) {
  std::vector<TaskId> tasks;
  std::vector<WorkerId> workers;
  for (const auto& pair : action.pairs) {
    tasks.push_back(pair.task);
    workers.push_back(pair.worker);
  }
  auto has_duplicates = [](std::vector<std::size_t> ids) {
    std::sort(ids.begin(), ids.end());
    return std::adjacent_find(ids.begin(), ids.end()) != ids.end();
  };
  if (has_duplicates(tasks)) return false;
  return mode == MatchingMode::kUnrestricted || !has_duplicates(workers);
}

std::vector<SkillVector> ProblemInstance::true_skills() const {
  std::vector<SkillVector> skills;
  skills.reserve(workers.size());
  for (const auto& w : workers) skills.push_back(w.true_skills);
  return skills;
}

namespace {

std::vector<Level> draw_levels(Rng& rng, std::size_t dims) {
  std::vector<Level> levels;
  levels.reserve(dims);
  for (std::size_t m = 0; m < dims; ++m) {
    levels.push_back(
        Level::from_index(static_cast<int>(rng.below(Level::kCount))));
  }
  return levels;
}

std::vector<Worker> draw_workers(std::size_t count, std::size_t dims,
                                 Rng::Seed seed) {
  Rng rng(Rng::derive(seed, "workers"));
  std::vector<Worker> workers;
  workers.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    workers.push_back(Worker{w, SkillVector{draw_levels(rng, dims)}});
  }
  return workers;
}

}  // namespace

ProblemInstance generate_instance(std::size_t worker_count,
                                  std::size_t task_count,
                                  std::size_t skill_dims, Rng::Seed seed) {
  if (worker_count < 1) {
    throw ConfigError("worker count must be at least 1", "workers");
  }
  if (task_count < worker_count) {
    throw ConfigError("task count must be at least the worker count", "tasks");
  }
  if (skill_dims < 1) {
    throw ConfigError("skill dimension count must be at least 1", "skills");
  }
  ProblemInstance instance;
  instance.skill_dims = skill_dims;
  instance.workers = draw_workers(worker_count, skill_dims, seed);
  Rng rng(Rng::derive(seed, "tasks"));
  instance.tasks.reserve(task_count);
  for (std::size_t t = 0; t < task_count; ++t) {
    instance.tasks.push_back(TaskSpec{t, draw_levels(rng, skill_dims)});
  }
  return instance;
}

ProblemInstance regenerate_workers(const ProblemInstance& instance,
                                   Rng::Seed seed) {
  ProblemInstance next = instance;
  next.workers =
      draw_workers(instance.workers.size(), instance.skill_dims, seed);
  return next;
}

std::uint64_t fingerprint(const ProblemInstance& instance) {
  std::uint64_t hash = splitmix64(instance.skill_dims);
  auto mix = [&hash](std::uint64_t v) { hash = splitmix64(hash ^ v); };
  mix(instance.workers.size());
  for (const auto& w : instance.workers) {
    for (Level l : w.true_skills.levels) mix(static_cast<std::uint64_t>(l.index()));
  }
  mix(instance.tasks.size());
  for (const auto& t : instance.tasks) {
    for (Level l : t.requirements) mix(static_cast<std::uint64_t>(l.index()) + 16);
  }
  return hash;
}

}  // namespace skillmatch
