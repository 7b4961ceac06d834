#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace cner {

/// splitmix64; portable and fully specified.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
};

/// Seed mixer for deriving independent streams from several keys.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key);

template <typename T>
void shuffle(std::vector<T>& items, SplitMix64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

struct StatResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double df1 = 0.0;
  /// Second degrees of freedom (ANOVA only).
  double df2 = 0.0;
  /// True when the statistic is infinite (zero variance, unequal means).
  bool degenerate = false;
};

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

/// P(F > f) for F(d1, d2).
double f_survival(double f, double d1, double d2);
/// P(|T| > |t|) for Student's t with df degrees of freedom.
double t_two_tailed(double t, double df);

/// Balanced one-way ANOVA.
StatResult anova_oneway(std::span<const std::vector<double>> groups);

/// Pooled-variance Student's t-test, two-tailed.
StatResult ttest_unpaired(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> values);

}  // namespace cner
