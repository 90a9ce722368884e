#include "wiretap/statistics.hpp"

#include <cmath>
#include <stdexcept>

#include "wiretap/errors.hpp"

namespace wiretap::stats {

BatchMeans::BatchMeans(std::uint64_t total_samples, int batches)
    : total_(total_samples), batches_(batches), next_boundary_(0) {
  if (batches < 2) throw DomainError("BatchMeans: need at least 2 batches");
  if (total_samples < static_cast<std::uint64_t>(batches)) {
    throw DomainError("BatchMeans: fewer samples than batches");
  }
  next_boundary_ = total_ / static_cast<std::uint64_t>(batches_);
  batch_means_.reserve(static_cast<std::size_t>(batches_));
}

void BatchMeans::add(double x) {
  if (count_ >= total_) throw std::logic_error("BatchMeans: more samples than announced");
  sum_ += x;
  batch_sum_ += x;
  ++count_;
  if (count_ == next_boundary_) {
    batch_means_.push_back(static_cast<double>(batch_sum_ / static_cast<long double>(count_ - batch_start_)));
    batch_sum_ = 0.0L;
    batch_start_ = count_;
    const auto b = static_cast<std::uint64_t>(batch_means_.size()) + 1;
    next_boundary_ = b * total_ / static_cast<std::uint64_t>(batches_);
  }
}

double BatchMeans::mean() const {
  if (count_ == 0) throw std::logic_error("BatchMeans: no samples");
  return static_cast<double>(sum_ / static_cast<long double>(count_));
}

double BatchMeans::standard_error() const {
  if (count_ != total_) throw std::logic_error("BatchMeans: standard error needs every announced sample");
  const auto n = static_cast<double>(batch_means_.size());
  double m = 0.0;
  for (double b : batch_means_) m += b;
  m /= n;
  double ss = 0.0;
  for (double b : batch_means_) ss += (b - m) * (b - m);
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace wiretap::stats
