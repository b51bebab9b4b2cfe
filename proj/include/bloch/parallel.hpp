#pragma once

#include <cstddef>
#include <functional>

namespace bloch {

/// Worker count: BLOCH_INFOGEO_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned configured_threads();

/// Runs body(i) for i in [0, n) on up to `workers` threads (0 means
/// configured_threads()). Indices are split into contiguous blocks; body must
/// only write to slots owned by its index. Exceptions are rethrown in the
/// caller after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = 0);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bloch
