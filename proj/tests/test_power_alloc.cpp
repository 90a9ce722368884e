#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wiretap/channel_model.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/power_alloc.hpp"
#include "wiretap/statistics.hpp"

using namespace wiretap;
using namespace wiretap::power;
using channel::ChannelParams;

namespace {

double secrecy_lagrangian(double lambda, double hm, double he, double p) {
  return std::log1p(hm * p) - std::log1p(he * p) - lambda * p;
}

}  // namespace

TEST_CASE("optimal_power: reference values") {
  CHECK(optimal_power(1.0, 1.0, 1.0) == 0.0);
  CHECK(optimal_power(1.0, 2.0, 1.0) == 0.0);  // exactly on the activation boundary
  CHECK(optimal_power(1.0, 0.5, 3.0) == 0.0);

  const double p = optimal_power(0.5, 4.0, 1.0);
  CHECK(p == doctest::Approx(0.655868845744949797).epsilon(1e-14));
  // Literal form of the allocation rule.
  const double d = 1.0 - 0.25;
  CHECK(p == doctest::Approx(0.5 * (std::sqrt(d * d + 8.0 * d) - 1.25)).epsilon(1e-14));
  const double argmax = testing::golden_section_max(
      [](double x) { return secrecy_lagrangian(0.5, 4.0, 1.0, x); }, 0.0, 1e3, 1e-10);
  CHECK(std::abs(p - argmax) < 1e-6);
}

TEST_CASE("optimal_power: matches numerical maximization on random points") {
  std::mt19937_64 rng(7);
  std::exponential_distribution<double> gain(1.0);
  std::uniform_real_distribution<double> log_lambda(-4.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double lambda = std::pow(10.0, log_lambda(rng));
    const double hm = 3.0 * gain(rng) + 1e-6;
    const double he = gain(rng) + 1e-6;
    const double p = optimal_power(lambda, hm, he);
    const double hi = std::max(10.0, 4.0 / lambda);
    const double argmax = testing::golden_section_max(
        [&](double x) { return secrecy_lagrangian(lambda, hm, he, x); }, 0.0, hi, 1e-10 * hi);
    CHECK(std::abs(p - argmax) < 1e-6 * std::max(1.0, hi));
  }
}

TEST_CASE("optimal_power: zero on h_M <= h_E, monotone in lambda and h_M") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  std::uniform_real_distribution<double> log_lambda(-5.0, 1.0);
  for (int i = 0; i < 10'000; ++i) {
    const double lambda = std::pow(10.0, log_lambda(rng));
    const double a = u(rng);
    const double b = u(rng);
    const double he = std::max(a, b);
    const double hm = std::min(a, b);
    CHECK(optimal_power(lambda, hm, he) == 0.0);

    const double p = optimal_power(lambda, he, hm);
    CHECK(p >= 0.0);
    CHECK(std::isfinite(p));
    CHECK(optimal_power(lambda * 1.5, he, hm) <= p);
    CHECK(optimal_power(lambda, he * 1.1, hm) >= p);
  }
}

TEST_CASE("optimal_power: stationarity where active") {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> gain(1.0);
  int active = 0;
  for (int i = 0; i < 20'000 && active < 1000; ++i) {
    const double lambda = 1e-3;
    const double hm = 2.0 * gain(rng);
    const double he = gain(rng);
    const double p = optimal_power(lambda, hm, he);
    if (p <= 0.0) continue;
    ++active;
    CHECK(std::abs(secrecy_lagrangian_slope(lambda, hm, he, p)) < 1e-8);
  }
  CHECK(active == 1000);
}

TEST_CASE("optimal_power: finite for extreme gains and domain errors") {
  CHECK(optimal_power(1e-3, 5.0, 1e-300) == doctest::Approx(1e3 - 0.2).epsilon(1e-12));
  CHECK(std::isfinite(optimal_power(1e-12, 1e6, 1e-6)));
  CHECK_THROWS_AS(optimal_power(0.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(optimal_power(1.0, 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(optimal_power(1.0, 1.0, -0.5), DomainError);
}

TEST_CASE("mean_power: limits and monotonicity") {
  const auto params = ChannelParams::from_cgr(1.0, 0.0);
  CHECK(mean_power(1e6, params) < 1e-4);
  double prev = std::numeric_limits<double>::infinity();
  for (double lambda = 1e-6; lambda < 100.0; lambda *= 3.0) {
    const double mp = mean_power(lambda, params);
    CHECK(mp < prev);
    prev = mp;
  }
  CHECK(mean_power(1e-8, params) > 1e3);
}

TEST_CASE("mean_power: quadrature agrees with a sample average") {
  const auto params = ChannelParams::from_cgr(1.0, 0.0);
  const double quad = mean_power(1.0, params);
  const std::uint64_t n = 10'000'000;
  channel::RandomStream stream(2024, 0);
  stats::BatchMeans acc(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto s = channel::sample_channel_pair(params, stream);
    acc.add(s.h_main > s.h_eve ? optimal_power(1.0, s.h_main, s.h_eve) : 0.0);
  }
  CHECK(std::abs(acc.mean() - quad) < 3.0 * acc.standard_error());
}

TEST_CASE("solve_lagrange_multiplier: budget binds") {
  const auto params = ChannelParams::from_cgr(1.0, 0.0);
  const auto policy = solve_lagrange_multiplier(params, PowerConstraint{10.0});
  CHECK(policy.lambda > 0.0);
  CHECK(std::abs(policy.achieved_mean_power / 10.0 - 1.0) < 1e-4);
  CHECK(std::abs(mean_power(policy.lambda, params) - 10.0) < 1e-3);

  // Sampled mean power at the solved multiplier.
  const std::uint64_t n = 2'000'000;
  channel::RandomStream stream(99, 0);
  stats::BatchMeans acc(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto s = channel::sample_channel_pair(params, stream);
    acc.add(s.h_main > s.h_eve ? policy.power(s.h_main, s.h_eve) : 0.0);
  }
  CHECK(std::abs(acc.mean() - 10.0) < 3.0 * acc.standard_error());

  // A larger budget needs a smaller multiplier.
  const auto doubled = solve_lagrange_multiplier(params, PowerConstraint{20.0});
  CHECK(doubled.lambda < policy.lambda);
}

TEST_CASE("solve_lagrange_multiplier: small budgets and correlated channels") {
  for (double p_bar : {1e-3, 0.1, 1.0, 1e3}) {
    for (double rho : {0.0, 0.5, 0.9}) {
      const auto params = ChannelParams::from_cgr(0.5, rho);
      const auto policy = solve_lagrange_multiplier(params, PowerConstraint{p_bar});
      CHECK(std::abs(policy.achieved_mean_power / p_bar - 1.0) < 1e-4);
    }
  }
}

TEST_CASE("PowerConstraint: validation and dB conversion") {
  CHECK(PowerConstraint::from_db(20.0).p_bar == doctest::Approx(100.0).epsilon(1e-14));
  CHECK_THROWS_AS(PowerConstraint{0.0}.validate(), DomainError);
  CHECK_THROWS_AS(solve_lagrange_multiplier(ChannelParams::from_cgr(1.0, 0.0), PowerConstraint{-1.0}), DomainError);
}
