#pragma once

// Correlated Rayleigh wiretap channel: joint law of the main/eavesdropper
// power gains, the law of their ratio, and a seeded pair sampler.

#include <complex>
#include <cstdint>
#include <random>

namespace wiretap::channel {

/// Smallest 1 - rho used by any density evaluation. Exact rho = 1 is only
/// served by the closed-form limits in the capacity module.
inline constexpr double kMinDecorrelation = 1e-9;

struct ChannelParams {
  double mean_gain_main = 1.0;  ///< E[H_M]
  double mean_gain_eve = 1.0;   ///< E[H_E]
  double pcc = 0.0;             ///< power correlation coefficient rho

  /// Unit-mean eavesdropper channel, main channel of mean `cgr`.
  static ChannelParams from_cgr(double cgr, double pcc);

  /// Channel gain ratio kappa = E[H_M] / E[H_E].
  double cgr() const { return mean_gain_main / mean_gain_eve; }

  /// Throws DomainError unless the gains are positive and 0 <= rho < 1
  /// (rho <= 1 when `allow_full_correlation`).
  void validate(bool allow_full_correlation = false) const;
};

struct ChannelSample {
  double h_main = 0.0;
  double h_eve = 0.0;
};

/// f(h_M, h_E) of the bivariate Rayleigh power gains.
double joint_power_gain_pdf(const ChannelParams& params, double h_main, double h_eve);
/// log f(h_M, h_E); -inf where the density underflows.
double log_joint_power_gain_pdf(const ChannelParams& params, double h_main, double h_eve);

/// Density of U = H_M / H_E.
double ratio_pdf(const ChannelParams& params, double u);

/// Antiderivative of ratio_pdf, (u - kappa) / (2 sqrt((u + kappa)^2 - 4 rho kappa u)).
/// Ranges over [-1/2, 1/2]; P(U <= u) = ratio_antiderivative(u) + 1/2.
double ratio_antiderivative(const ChannelParams& params, double u);

/// Reproducible random source. Streams are keyed by (seed, stream index) so
/// independent tasks draw from non-overlapping, order-independent sequences.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index);

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_gaussian();

 private:
  std::mt19937_64 engine_;
};

/// Draws correlated complex amplitudes (g_M, g_E) with E|g_M|^2 = mean_gain_main,
/// E|g_E|^2 = mean_gain_eve and amplitude correlation sqrt(rho), and returns
/// their squared magnitudes.
ChannelSample sample_channel_pair(const ChannelParams& params, RandomStream& stream);

}  // namespace wiretap::channel
