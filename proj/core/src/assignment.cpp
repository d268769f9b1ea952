#include "skillmatch/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "skillmatch/error.hpp"

namespace skillmatch {

CostMatrix::CostMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) {
    throw ContractViolation("cost matrix is not square");
  }
  for (double c : entries_) {
    if (!std::isfinite(c) || c < 0.0) {
      throw ContractViolation("cost matrix entries must be finite and >= 0");
    }
  }
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> entries;
  entries.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw ContractViolation("cost matrix is not square: row of length " +
                              std::to_string(row.size()) + " in a " +
                              std::to_string(n) + "-row matrix");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return CostMatrix(n, std::move(entries));
}

CostMatrix CostMatrix::padded(std::size_t rows, std::size_t cols,
                              std::span<const double> entries, double fill) {
  if (cols > rows || entries.size() != rows * cols) {
    throw ContractViolation("padded: expected a rows x cols matrix, cols <= rows");
  }
  std::vector<double> square(rows * rows, fill);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(entries.begin() + static_cast<std::ptrdiff_t>(r * cols), cols,
                square.begin() + static_cast<std::ptrdiff_t>(r * rows));
  }
  return CostMatrix(rows, std::move(square));
}

double assignment_cost(const CostMatrix& costs,
                       std::span<const std::size_t> column_of_row) {
  double total = 0.0;
  for (std::size_t r = 0; r < column_of_row.size(); ++r) {
    total += costs(r, column_of_row[r]);
  }
  return total;
}

Matching solve(const CostMatrix& costs) {
  const std::size_t n = costs.size();
  Matching result;
  if (n == 0) return result;

  // 1-based arrays; index 0 is the virtual source column.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<std::size_t> row_of_col(n + 1, 0), prev_col(n + 1, 0);
  std::vector<double> slack(n + 1);
  std::vector<char> visited(n + 1);

  for (std::size_t row = 1; row <= n; ++row) {
    row_of_col[0] = row;
    std::size_t col = 0;
    std::fill(slack.begin(), slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[col] = 1;
      const std::size_t r = row_of_col[col];
      double delta = kInf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        const double reduced = costs(r - 1, j - 1) - row_pot[r] - col_pot[j];
        if (reduced < slack[j]) {
          slack[j] = reduced;
          prev_col[j] = col;
        }
        if (slack[j] < delta) {
          delta = slack[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (visited[j]) {
          row_pot[row_of_col[j]] += delta;
          col_pot[j] -= delta;
        } else {
          slack[j] -= delta;
        }
      }
      col = next;
    } while (row_of_col[col] != 0);
    // Flip the augmenting path back to the source.
    do {
      const std::size_t back = prev_col[col];
      row_of_col[col] = row_of_col[back];
      col = back;
    } while (col != 0);
  }

  result.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    result.column_of_row[row_of_col[j] - 1] = j - 1;
  }
  result.total_cost = assignment_cost(costs, result.column_of_row);
  return result;
}

Matching brute_force_solve(const CostMatrix& costs) {
  const std::size_t n = costs.size();
  if (n > kBruteForceLimit) {
    throw ContractViolation("brute_force_solve: n = " + std::to_string(n) +
                            " exceeds the limit of " +
                            std::to_string(kBruteForceLimit));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Matching best{perm, assignment_cost(costs, perm)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double cost = assignment_cost(costs, perm);
    if (cost < best.total_cost) best = Matching{perm, cost};
  }
  return best;
}

namespace {

template <typename Skills>
CostMatrix build(std::span<const Skills> skills,
                 std::span<const TaskSpec> tasks,
                 const FeedbackModel& feedback) {
  const std::size_t n = skills.size();
  if (tasks.size() != n) {
    throw ContractViolation("build_cost_matrix: " + std::to_string(n) +
                            " workers vs " + std::to_string(tasks.size()) +
                            " tasks");
  }
  std::vector<double> entries;
  entries.reserve(n * n);
  for (const auto& s : skills) {
    for (const auto& task : tasks) {
      // 1 - E[r] keeps entries in [0, 1] and has the same minimisers as -E[r].
      entries.push_back(1.0 - expected_reward(s, task, feedback));
    }
  }
  return CostMatrix(n, std::move(entries));
}

}  // namespace

CostMatrix build_cost_matrix(std::span<const SkillVector> skills,
                             std::span<const TaskSpec> tasks,
                             const FeedbackModel& feedback) {
  return build(skills, tasks, feedback);
}

CostMatrix build_cost_matrix(std::span<const SkillEstimate> estimates,
                             std::span<const TaskSpec> tasks,
                             const FeedbackModel& feedback) {
  return build(estimates, tasks, feedback);
}

}  // namespace skillmatch
