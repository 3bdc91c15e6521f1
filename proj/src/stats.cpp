#include "bsfp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bsfp/error.hpp"
#include "bsfp/rng.hpp"

namespace bsfp {

namespace {

double iqm_sorted(std::span<const double> sorted) {
  const std::size_t n = sorted.size();
  const std::size_t cut = n < 4 ? 0 : (n + 3) / 4;
  double sum = 0.0;
  for (std::size_t i = cut; i < n - cut; ++i) sum += sorted[i];
  return sum / static_cast<double>(n - 2 * cut);
}

}  // namespace

double iqm(std::span<const double> xs) {
  if (xs.empty()) throw InsufficientDataError("iqm of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  return iqm_sorted(v);
}

double quantile(std::span<const double> xs, double p) {
  if (xs.empty()) throw InsufficientDataError("quantile of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double iqr(std::span<const double> xs) {
  if (xs.empty()) throw InsufficientDataError("iqr of an empty sample");
  return quantile(xs, 0.75) - quantile(xs, 0.25);
}

std::pair<double, double> bootstrap_ci(std::span<const double> xs, std::size_t resamples, double alpha,
                                       std::uint64_t seed) {
  if (xs.size() < 2) throw InsufficientDataError("bootstrap needs at least 2 observations");
  if (resamples == 0) throw InsufficientDataError("bootstrap needs at least 1 resample");
  Rng rng(mix64(seed));
  std::vector<double> reps(resamples), buf(xs.size());
  for (auto& r : reps) {
    for (auto& b : buf) b = xs[uniform_index(rng, xs.size())];
    std::sort(buf.begin(), buf.end());
    r = iqm_sorted(buf);
  }
  return {quantile(reps, alpha / 2.0), quantile(reps, 1.0 - alpha / 2.0)};
}

StatSummary summarize(std::span<const double> xs, std::size_t resamples, double alpha, std::uint64_t seed) {
  StatSummary s;
  s.n = xs.size();
  s.iqm = iqm(xs);
  s.iqr = iqr(xs);
  if (xs.size() >= 2 && resamples > 0) {
    std::tie(s.ci_lo, s.ci_hi) = bootstrap_ci(xs, resamples, alpha, seed);
  } else {
    s.ci_lo = s.ci_hi = s.iqm;
  }
  return s;
}

}  // namespace bsfp
