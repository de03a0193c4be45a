#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace magnonlab {

/// log(1 - exp(-x)) for x > 0, accurate both near 0 and for large x.
double log1mexp(double x);

/// Streaming log-sum-exp. Keeps a running maximum so that partition
/// functions spanning hundreds of decades accumulate without overflow.
class LogSumExp {
 public:
  void add(double log_term);
  void add_weighted(double log_term, double log_weight) { add(log_term + log_weight); }
  void merge(const LogSumExp& other);

  /// -inf when nothing was added.
  double value() const;
  bool empty() const { return max_ == -std::numeric_limits<double>::infinity(); }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_sum_ = 0.0;
};

double log_sum_exp(std::span<const double> log_terms);

/// Neumaier compensated summation; summation order is the call order.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double x);

/// 64-bit FNV-1a, used as a stable content hash for config echoes.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Runs body(i) for i in [0, count) on up to `workers` threads. Each index
/// is handled exactly once; callers write into preallocated slots so the
/// result never depends on scheduling. workers == 0 means hardware threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace magnonlab
