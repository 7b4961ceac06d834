#include "cner/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <numeric>

#include "cner/error.hpp"

namespace cner {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Correction {
  std::vector<double> s;
  std::vector<double> y;
  double rho = 0.0;
};

// Two-loop recursion: returns -H g.
std::vector<double> search_direction(const std::deque<Correction>& memory,
                                     std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(memory.size());
  for (std::size_t k = memory.size(); k-- > 0;) {
    const auto& c = memory[k];
    alpha[k] = c.rho * dot(c.s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * c.y[i];
  }
  if (!memory.empty()) {
    const auto& last = memory.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (auto& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < memory.size(); ++k) {
    const auto& c = memory[k];
    const double beta = c.rho * dot(c.y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * c.s[i];
  }
  for (auto& v : q) v = -v;
  return q;
}

}  // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options) {
  const std::size_t n = x0.size();
  LbfgsResult result;
  std::vector<double> x = std::move(x0);
  std::vector<double> g(n, 0.0);
  double f = objective(x, g);
  if (!std::isfinite(f)) throw NumericError("objective is not finite at the starting point");

  std::deque<Correction> memory;
  std::vector<double> x_new(n), g_new(n);
  std::size_t small_decreases = 0;
  bool restarted = false;

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    const double gnorm = norm(g);
    if (gnorm == 0.0) {
      result.converged = true;
      break;
    }

    std::vector<double> d = search_direction(memory, g);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      memory.clear();
      d.assign(g.begin(), g.end());
      for (auto& v : d) v = -v;
      slope = -gnorm * gnorm;
    }

    double step = memory.empty() ? 1.0 / gnorm : 1.0;
    bool accepted = false;
    double f_new = f;
    for (std::size_t bt = 0; bt <= options.max_backtracks; ++bt) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = objective(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + options.armijo_c1 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }

    if (!accepted) {
      if (restarted || memory.empty())
        throw TrainingError("line search failed after restart at iteration " +
                                std::to_string(iter),
                            x);
      memory.clear();
      restarted = true;
      continue;
    }
    restarted = false;

    Correction c;
    c.s.resize(n);
    c.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      c.s[i] = x_new[i] - x[i];
      c.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(c.s, c.y);
    if (sy > 1e-12) {
      c.rho = 1.0 / sy;
      memory.push_back(std::move(c));
      if (memory.size() > options.memory) memory.pop_front();
    }

    const double decrease = f - f_new;
    const double relative = f != 0.0 ? decrease / std::fabs(f) : 0.0;
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    result.history.push_back({iter, f, norm(g), step});

    if (relative < options.relative_tolerance) {
      if (++small_decreases >= options.convergence_window) {
        result.converged = true;
        break;
      }
    } else {
      small_decreases = 0;
    }
  }

  result.x = std::move(x);
  result.value = f;
  return result;
}

}  // namespace cner
