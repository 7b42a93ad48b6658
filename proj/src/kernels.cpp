#include "clockcal/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#ifdef CLOCKCAL_HAVE_OPENMP
#include <omp.h>
#endif

namespace clockcal::kernels {

namespace {

// Runs fill(b) for every block index, optionally across threads. Each block
// is computed independently, so the combine step below is order-stable no
// matter how the blocks were scheduled.
template <class F>
void for_each_block(std::int64_t nblocks, bool parallel, F&& fill) {
#ifdef CLOCKCAL_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
      fill(b);
    }
    return;
  }
#else
  (void)parallel;
#endif
  for (std::int64_t b = 0; b < nblocks; ++b) {
    fill(b);
  }
}

std::int64_t block_count(std::size_t n) {
  return static_cast<std::int64_t>((n + kBlock - 1) / kBlock);
}

}  // namespace

double naive_sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    s += v;
  }
  return s;
}

double block_sum(std::span<const double> x, bool parallel) {
  if (x.empty()) {
    return 0.0;
  }
  const std::int64_t nb = block_count(x.size());
  if (nb == 1) {
    return naive_sum(x);
  }
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
  const bool par = parallel && x.size() >= kParallelCutoff;
  for_each_block(nb, par, [&](std::int64_t b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(lo + kBlock, x.size());
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      s += x[i];
    }
    partial[static_cast<std::size_t>(b)] = s;
  });
  double total = 0.0;
  for (double p : partial) {
    total += p;
  }
  return total;
}

Moments moments(std::span<const double> x, bool parallel) {
  Moments m;
  m.n = x.size();
  if (x.empty()) {
    return m;
  }
  m.mean = block_sum(x, parallel) / static_cast<double>(x.size());

  const std::int64_t nb = block_count(x.size());
  std::vector<double> sq(static_cast<std::size_t>(nb), 0.0);
  std::vector<double> mx(static_cast<std::size_t>(nb), 0.0);
  const bool par = parallel && x.size() >= kParallelCutoff;
  const double mean = m.mean;
  for_each_block(nb, par, [&](std::int64_t b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(lo + kBlock, x.size());
    double s = 0.0;
    double amax = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double d = x[i] - mean;
      s += d * d;
      amax = std::max(amax, std::abs(x[i]));
    }
    sq[static_cast<std::size_t>(b)] = s;
    mx[static_cast<std::size_t>(b)] = amax;
  });
  double sumsq = 0.0;
  for (double p : sq) {
    sumsq += p;
  }
  for (double p : mx) {
    m.max_abs = std::max(m.max_abs, p);
  }
  m.stddev = x.size() > 1 ? std::sqrt(sumsq / static_cast<double>(x.size() - 1)) : 0.0;
  return m;
}

double fraction_within(std::span<const double> x, double bound, bool parallel) {
  if (x.empty()) {
    return 0.0;
  }
  const std::int64_t n = static_cast<std::int64_t>(x.size());
  std::int64_t count = 0;
#ifdef CLOCKCAL_HAVE_OPENMP
  if (parallel && x.size() >= kParallelCutoff) {
#pragma omp parallel for schedule(static) reduction(+ : count)
    for (std::int64_t i = 0; i < n; ++i) {
      if (std::abs(x[static_cast<std::size_t>(i)]) <= bound) {
        ++count;
      }
    }
    return static_cast<double>(count) / static_cast<double>(n);
  }
#else
  (void)parallel;
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    if (std::abs(x[static_cast<std::size_t>(i)]) <= bound) {
      ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace clockcal::kernels
