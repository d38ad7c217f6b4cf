#ifndef LDPCPGM_CHANNEL_HPP
#define LDPCPGM_CHANNEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ldpcpgm/factor.hpp"

namespace ldpcpgm {

/// BPSK over AWGN. Energy per bit is fixed at one; `rate` is only used for
/// the rate-compensated SNR bookkeeping.
struct ChannelConfig {
  double sigma2 = 1.0;  // noise variance
  double eb = 1.0;      // energy per bit
  double rate = 0.5;    // code rate K/N
};

/// Bit mapping 0 -> +1, 1 -> -1.
inline double bpsk_symbol(std::uint8_t bit) { return bit ? -1.0 : 1.0; }

/// Rate-compensated SNR: 10 log10(Eb / (2 R sigma^2)).
double snr_db(const ChannelConfig& cfg);

/// Noise variance hitting a target rate-compensated SNR.
double sigma2_for_snr_db(double target_db, double rate, double eb = 1.0);

/// x_n = s(b_n) + g_n with independent zero-mean Gaussian noise of variance
/// sigma2, drawn from a generator seeded by `seed` (deterministic per seed).
std::vector<double> transmit(std::span<const std::uint8_t> codeword, const ChannelConfig& cfg,
                             std::uint64_t seed);

/// Per-bit normalized binary likelihood factors
/// L(b=0) : L(b=1) = exp(-(x-1)^2/2s2) : exp(-(x+1)^2/2s2),
/// never exactly zero for finite x.
std::vector<DiscreteFactor> likelihood_evidence(std::span<const double> received,
                                                const ChannelConfig& cfg);

/// Single-sample version of likelihood_evidence; returns P(b=0 | x).
double prob_bit_zero(double x, double sigma2);

}  // namespace ldpcpgm

#endif  // LDPCPGM_CHANNEL_HPP
