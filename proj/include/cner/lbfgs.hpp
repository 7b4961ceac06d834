#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cner {

struct LbfgsOptions {
  std::size_t memory = 10;
  std::size_t max_iterations = 500;
  /// Stop when (f_prev - f) / |f| < relative_tolerance this many times in a row.
  double relative_tolerance = 1e-4;
  std::size_t convergence_window = 3;
  /// Armijo sufficient-decrease constant; the step halves on rejection.
  double armijo_c1 = 1e-4;
  std::size_t max_backtracks = 40;
};

/// Writes the gradient at x into the second argument and returns f(x).
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

struct LbfgsIteration {
  std::size_t iteration = 0;
  double value = 0.0;
  double gradient_norm = 0.0;
  double step = 0.0;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
  std::vector<LbfgsIteration> history;
};

/// Minimizes `objective` from `x0`. Throws TrainingError when backtracking
/// fails twice in a row (once more after a steepest-descent restart).
LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options);

}  // namespace cner
