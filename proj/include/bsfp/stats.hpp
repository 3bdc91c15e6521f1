#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace bsfp {

/// Mean of the sorted values with rank in [ceil(n/4), n - ceil(n/4)); plain mean for n < 4.
double iqm(std::span<const double> xs);

/// Quantile with linear interpolation between order statistics (type 7).
double quantile(std::span<const double> xs, double p);

/// Q3 - Q1.
double iqr(std::span<const double> xs);

/// Percentile bootstrap interval [alpha/2, 1 - alpha/2] of the IQM over
/// `resamples` with-replacement resamples.
std::pair<double, double> bootstrap_ci(std::span<const double> xs, std::size_t resamples = 10000,
                                       double alpha = 1e-5, std::uint64_t seed = 0);

struct StatSummary {
  double iqm = 0.0;
  double iqr = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::size_t n = 0;
};

/// IQM, IQR and (for n >= 2 and resamples > 0) the bootstrap interval; for
/// smaller samples the interval collapses onto the IQM.
StatSummary summarize(std::span<const double> xs, std::size_t resamples = 10000, double alpha = 1e-5,
                      std::uint64_t seed = 0);

}  // namespace bsfp
