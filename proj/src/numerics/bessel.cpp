#include <cmath>
#include <limits>
#include <numbers>

#include "wiretap/errors.hpp"
#include "wiretap/numerics.hpp"

namespace wiretap::numerics {
namespace {

// Below this the power series is summed directly; above it the asymptotic
// expansion is accurate to machine precision (its smallest term is ~exp(-2x)).
constexpr double kSeriesLimit = 20.0;

double i0_series_scaled(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * std::numeric_limits<double>::epsilon()) break;
  }
  return std::exp(-x) * sum;
}

double i0_asymptotic_scaled(double x) {
  // sum_k [(2k-1)!!]^2 / (k! (8x)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * x);
    if (next > term) break;  // divergent tail
    term = next;
    sum += term;
    if (term < sum * std::numeric_limits<double>::epsilon()) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_i0_scaled(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("bessel_i0_scaled: argument must be finite and nonnegative");
  }
  return x <= kSeriesLimit ? i0_series_scaled(x) : i0_asymptotic_scaled(x);
}

}  // namespace wiretap::numerics
