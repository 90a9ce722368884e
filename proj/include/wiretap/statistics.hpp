#pragma once

#include <cstdint>
#include <vector>

namespace wiretap::stats {

/// Running mean with a batch-means standard error. Samples are assigned to
/// `batches` contiguous, near-equal batches in arrival order, so the result
/// depends only on the sample sequence.
class BatchMeans {
 public:
  explicit BatchMeans(std::uint64_t total_samples, int batches = 100);

  void add(double x);

  std::uint64_t count() const { return count_; }
  double mean() const;
  /// Standard deviation of the batch means over sqrt(batches).
  double standard_error() const;

 private:
  std::uint64_t total_;
  int batches_;
  std::uint64_t count_ = 0;
  std::uint64_t next_boundary_;
  std::uint64_t batch_start_ = 0;
  long double sum_ = 0.0L;
  long double batch_sum_ = 0.0L;
  std::vector<double> batch_means_;
};

}  // namespace wiretap::stats
