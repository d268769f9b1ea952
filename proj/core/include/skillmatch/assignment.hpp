#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "skillmatch/domain.hpp"
#include "skillmatch/feedback.hpp"

namespace skillmatch {

/// Square matrix of finite, nonnegative costs; rows are workers, columns
/// tasks. Row-major storage.
class CostMatrix {
 public:
  CostMatrix() = default;
  /// Throws ContractViolation unless `entries.size() == n * n` and every entry
  /// is finite and nonnegative.
  CostMatrix(std::size_t n, std::vector<double> entries);

  static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

  /// Pads a rows x cols matrix (cols <= rows) with extra columns holding
  /// `fill`, producing a rows x rows matrix.
  static CostMatrix padded(std::size_t rows, std::size_t cols,
                           std::span<const double> entries, double fill);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t row, std::size_t col) const {
    return entries_[row * n_ + col];
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// column_of_row is a permutation of 0..n-1.
struct Matching {
  std::vector<std::size_t> column_of_row;
  double total_cost = 0.0;
};

/// Sum of the selected entries, accumulated in row order.
double assignment_cost(const CostMatrix& costs,
                       std::span<const std::size_t> column_of_row);

/// Minimum-cost perfect assignment, O(n^3) shortest augmenting paths with
/// row/column potentials.
Matching solve(const CostMatrix& costs);

/// Exhaustive search over all n! permutations; refuses n > 8.
Matching brute_force_solve(const CostMatrix& costs);

inline constexpr std::size_t kBruteForceLimit = 8;

/// Cost matrix with entry (w, t) = 1 - expected reward of worker w on task t.
/// `skills` has one entry per worker; tasks.size() must equal skills.size().
CostMatrix build_cost_matrix(std::span<const SkillVector> skills,
                             std::span<const TaskSpec> tasks,
                             const FeedbackModel& feedback);
CostMatrix build_cost_matrix(std::span<const SkillEstimate> estimates,
                             std::span<const TaskSpec> tasks,
                             const FeedbackModel& feedback);

}  // namespace skillmatch
