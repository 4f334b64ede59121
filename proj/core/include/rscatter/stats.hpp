#pragma once

#include <cstddef>
#include <span>

namespace rscatter {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval for a binomial proportion (95% by default).
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

/// sqrt(p (1 - p) / n).
double standard_error(double p, std::size_t n);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> values);

}  // namespace rscatter
