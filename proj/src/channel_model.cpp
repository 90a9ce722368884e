#include "wiretap/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wiretap/errors.hpp"
#include "wiretap/numerics.hpp"

namespace wiretap::channel {
namespace {

double decorrelation(double pcc) { return std::max(1.0 - pcc, kMinDecorrelation); }

void require_density_params(const ChannelParams& params) {
  params.validate(false);
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || std::isnan(v)) throw DomainError(std::string(what) + " must be nonnegative");
}

}  // namespace

ChannelParams ChannelParams::from_cgr(double cgr, double pcc) { return {cgr, 1.0, pcc}; }

void ChannelParams::validate(bool allow_full_correlation) const {
  if (!(mean_gain_main > 0.0) || !std::isfinite(mean_gain_main) || !(mean_gain_eve > 0.0) ||
      !std::isfinite(mean_gain_eve)) {
    throw DomainError("ChannelParams: mean gains must be positive and finite");
  }
  if (!(pcc >= 0.0)) throw DomainError("ChannelParams: pcc must be >= 0");
  if (allow_full_correlation ? !(pcc <= 1.0) : !(pcc < 1.0)) {
    throw DomainError(allow_full_correlation ? "ChannelParams: pcc must be <= 1"
                                             : "ChannelParams: pcc must be < 1 for density evaluation");
  }
}

double log_joint_power_gain_pdf(const ChannelParams& params, double h_main, double h_eve) {
  require_density_params(params);
  require_nonnegative(h_main, "h_main");
  require_nonnegative(h_eve, "h_eve");

  const double om = decorrelation(params.pcc);
  const double rho = 1.0 - om;
  const double x = h_main / params.mean_gain_main;
  const double y = h_eve / params.mean_gain_eve;
  const double root_xy = std::sqrt(x * y);
  const double d = std::sqrt(x) - std::sqrt(y);
  // x + y - 2 sqrt(rho x y), written without cancellation.
  const double spread = d * d + 2.0 * (om / (1.0 + std::sqrt(rho))) * root_xy;
  const double bessel_arg = 2.0 * std::sqrt(rho) * root_xy / om;
  return -std::log(params.mean_gain_main * params.mean_gain_eve * om) - spread / om +
         std::log(numerics::bessel_i0_scaled(bessel_arg));
}

double joint_power_gain_pdf(const ChannelParams& params, double h_main, double h_eve) {
  return std::exp(log_joint_power_gain_pdf(params, h_main, h_eve));
}

double ratio_pdf(const ChannelParams& params, double u) {
  require_density_params(params);
  require_nonnegative(u, "u");
  const double k = params.cgr();
  const double om = decorrelation(params.pcc);
  const double diff = u - k;
  const double q = diff * diff + 4.0 * k * u * om;  // (u + k)^2 - 4 rho k u
  return k * om * (u + k) / (q * std::sqrt(q));
}

double ratio_antiderivative(const ChannelParams& params, double u) {
  require_density_params(params);
  require_nonnegative(u, "u");
  if (std::isinf(u)) return 0.5;
  const double k = params.cgr();
  const double om = decorrelation(params.pcc);
  const double diff = u - k;
  return diff / (2.0 * std::sqrt(diff * diff + 4.0 * k * u * om));
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  engine_.seed(seq);
}

double RandomStream::uniform() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

std::complex<double> RandomStream::complex_gaussian() {
  const double radius = std::sqrt(-std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  return std::polar(radius, angle);
}

ChannelSample sample_channel_pair(const ChannelParams& params, RandomStream& stream) {
  params.validate(false);
  const std::complex<double> z_main = stream.complex_gaussian();
  const std::complex<double> z_free = stream.complex_gaussian();
  const double amp = std::sqrt(params.pcc);
  const std::complex<double> g_main = std::sqrt(params.mean_gain_main) * z_main;
  const std::complex<double> g_eve =
      std::sqrt(params.mean_gain_eve) * (amp * z_main + std::sqrt(1.0 - params.pcc) * z_free);
  return {std::norm(g_main), std::norm(g_eve)};
}

}  // namespace wiretap::channel
