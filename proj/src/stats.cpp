#include "cner/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cner/error.hpp"

namespace cner {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % bound;
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t key) {
  SplitMix64 rng(seed ^ (key * 0xD1B54A32D192ED03ULL));
  rng.next();
  return rng.next();
}

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge");
}

double sum_sq_dev(std::span<const double> v, double m) {
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s;
}

bool constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error("incomplete beta needs 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_survival(double f, double d1, double d2) {
  if (std::isinf(f)) return 0.0;
  if (f <= 0.0) return 1.0;
  return reg_inc_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double t_two_tailed(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return reg_inc_beta(df / 2.0, 0.5, df / (df + t * t));
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

StatResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error("ANOVA needs at least two groups");
  const std::size_t n = groups.front().size();
  if (n < 2) throw Error("ANOVA needs at least two values per group");
  for (const auto& g : groups)
    if (g.size() != n) throw Error("ANOVA groups must have equal sizes (balanced design)");

  const double k = static_cast<double>(groups.size());
  StatResult r;
  r.df1 = k - 1.0;
  r.df2 = k * (static_cast<double>(n) - 1.0);

  bool zero_within = std::all_of(groups.begin(), groups.end(), [](const auto& g) { return constant(g); });
  if (zero_within) {
    bool same = std::all_of(groups.begin(), groups.end(),
                            [&](const auto& g) { return g.front() == groups.front().front(); });
    r.statistic = same ? 0.0 : std::numeric_limits<double>::infinity();
    r.p_value = same ? 1.0 : 0.0;
    r.degenerate = !same;
    return r;
  }

  std::vector<double> means;
  double grand = 0.0;
  for (const auto& g : groups) {
    means.push_back(mean(g));
    grand += means.back();
  }
  grand /= k;
  double between = 0.0, within = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    between += static_cast<double>(n) * (means[i] - grand) * (means[i] - grand);
    within += sum_sq_dev(groups[i], means[i]);
  }
  r.statistic = (between / r.df1) / (within / r.df2);
  r.p_value = f_survival(r.statistic, r.df1, r.df2);
  return r;
}

StatResult ttest_unpaired(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error("t-test needs at least two values per sample");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  StatResult r;
  r.df1 = na + nb - 2.0;
  const double ma = mean(a), mb = mean(b);

  if (constant(a) && constant(b)) {
    const bool same = a.front() == b.front();
    r.statistic = same ? 0.0 : (ma > mb ? 1.0 : -1.0) * std::numeric_limits<double>::infinity();
    r.p_value = same ? 1.0 : 0.0;
    r.degenerate = !same;
    return r;
  }
  const double pooled = (sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / r.df1;
  r.statistic = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  r.p_value = std::clamp(t_two_tailed(r.statistic, r.df1), 0.0, 1.0);
  return r;
}

}  // namespace cner
