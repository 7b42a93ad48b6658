#pragma once

#include <cstddef>
#include <span>

namespace clockcal::kernels {

// Fixed combine granularity. The serial and OpenMP paths both reduce
// per-block partials in block order, so they produce bit-identical results
// and the output does not depend on the thread count.
inline constexpr std::size_t kBlock = 4096;

// Inputs below this size run serially even when `parallel` is requested.
inline constexpr std::size_t kParallelCutoff = std::size_t{1} << 15;

// Blocked sum: per-block partial sums combined left to right.
double block_sum(std::span<const double> x, bool parallel = false);

// Plain left-to-right accumulation; reference reduction for tests and bench.
double naive_sum(std::span<const double> x);

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1 denominator)
  double max_abs = 0.0;
};

Moments moments(std::span<const double> x, bool parallel = false);

// Fraction of samples with |x_i| <= bound (exact integer reduction).
double fraction_within(std::span<const double> x, double bound, bool parallel = false);

}  // namespace clockcal::kernels
