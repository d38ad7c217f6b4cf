#include "ldpcpgm/channel.hpp"

#include <cfloat>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ldpcpgm {

namespace {

void check_config(const ChannelConfig& cfg) {
  if (!(cfg.sigma2 > 0.0)) throw std::invalid_argument("channel: sigma2 must be positive");
  if (!(cfg.rate > 0.0 && cfg.rate < 1.0)) {
    throw std::invalid_argument("channel: rate must lie in (0, 1)");
  }
  if (!(cfg.eb > 0.0)) throw std::invalid_argument("channel: eb must be positive");
}

}  // namespace

double snr_db(const ChannelConfig& cfg) {
  check_config(cfg);
  return 10.0 * std::log10(cfg.eb / (2.0 * cfg.rate * cfg.sigma2));
}

double sigma2_for_snr_db(double target_db, double rate, double eb) {
  return eb / (2.0 * rate * std::pow(10.0, target_db / 10.0));
}

std::vector<double> transmit(std::span<const std::uint8_t> codeword, const ChannelConfig& cfg,
                             std::uint64_t seed) {
  check_config(cfg);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(cfg.sigma2));
  std::vector<double> x(codeword.size());
  for (std::size_t i = 0; i < codeword.size(); ++i) {
    x[i] = bpsk_symbol(codeword[i]) + noise(gen);
  }
  return x;
}

double prob_bit_zero(double x, double sigma2) {
  // Likelihood ratio L0/L1 = exp(2x/sigma2); evaluate as a logistic.
  const double t = 2.0 * x / sigma2;
  double p0;
  if (t >= 0.0) {
    p0 = 1.0 / (1.0 + std::exp(-t));
  } else {
    const double e = std::exp(t);
    p0 = e / (1.0 + e);
  }
  // Keep both states strictly positive for finite input.
  if (p0 <= 0.0) p0 = DBL_MIN;
  if (p0 >= 1.0) p0 = 1.0 - DBL_EPSILON / 2;
  return p0;
}

std::vector<DiscreteFactor> likelihood_evidence(std::span<const double> received,
                                                const ChannelConfig& cfg) {
  check_config(cfg);
  std::vector<DiscreteFactor> out;
  out.reserve(received.size());
  for (std::size_t i = 0; i < received.size(); ++i) {
    if (!std::isfinite(received[i])) {
      throw std::invalid_argument("likelihood_evidence: non-finite sample");
    }
    const double p0 = prob_bit_zero(received[i], cfg.sigma2);
    out.push_back(DiscreteFactor({static_cast<VariableId>(i)}, {{0u, p0}, {1u, 1.0 - p0}}));
  }
  return out;
}

}  // namespace ldpcpgm
