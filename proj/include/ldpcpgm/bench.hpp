#ifndef LDPCPGM_BENCH_HPP
#define LDPCPGM_BENCH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ldpcpgm/channel.hpp"
#include "ldpcpgm/code.hpp"
#include "ldpcpgm/engine.hpp"
#include "ldpcpgm/graph.hpp"

namespace ldpcpgm {

enum class GraphSelection { factor, cluster, both };

/// Both representations of one code plus their schedules and encoder,
/// compiled once and shared by all packets.
struct CompiledCode {
  ParityCheckMatrix h;
  SystematicEncoder encoder;
  ClusterGraph factor_graph;
  MessageSchedule factor_schedule;
  ClusterGraph cluster_graph;
  MessageSchedule cluster_schedule;

  explicit CompiledCode(const ParityCheckMatrix& matrix);
};

/// Per-bit hard decisions over normalized binary marginals; ties decide 0.
std::vector<std::uint8_t> hard_decision(const std::vector<DiscreteFactor>& marginals);

/// Operation counts of exactly one iteration (forward plus backward sweep)
/// on an initialized belief state; evidence absorption is excluded. The
/// counts depend only on the graph and schedule, not on the evidence.
OpCounter profile_single_iteration(const ClusterGraph& graph, const MessageSchedule& schedule,
                                   const std::vector<DiscreteFactor>& likelihoods);

struct SweepConfig {
  GraphSelection graphs = GraphSelection::both;
  double snr_lo_db = 0.0;
  double snr_hi_db = 8.0;
  int snr_points = 9;
  long packets = 20000;
  int max_iters = 35;
  std::uint64_t base_seed = 1;
  StopRule stop = StopRule::message_match;
};

struct SweepRow {
  std::string graph;
  double snr_db = 0.0;
  long packets = 0;
  long bit_errors = 0;
  double ber = 0.0;
  double avg_iterations = 0.0;
  double frac_multi_iter = 0.0;
  long failures = 0;
  std::uint64_t seed = 0;
};

/// Iteration statistics restricted to packets whose hard decision reached
/// the true message within the budget ("iterations required to decode");
/// one entry per emitted SweepRow, in the same order.
struct SweepIterationStats {
  std::string graph;
  double snr_db = 0.0;
  long matched_packets = 0;
  long matched_iteration_sum = 0;

  double mean_iterations_to_decode() const {
    return matched_packets ? static_cast<double>(matched_iteration_sum) / matched_packets : 0.0;
  }
};

/// Monte-Carlo BER sweep. Every (snr point, packet index) pair derives one
/// packet: random message, encode, BPSK + AWGN with per-packet seed
/// base_seed + global packet index. Both graphs decode the exact same
/// evidence. Deterministic given the config.
std::vector<SweepRow> run_ber_sweep(const CompiledCode& code, const SweepConfig& cfg,
                                    std::vector<SweepIterationStats>* stats = nullptr);

/// CSV with header graph,snr_db,packets,bit_errors,ber,avg_iterations,
/// frac_multi_iter,failures,seed.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct HammingStudyConfig {
  long packets = 200000;
  std::vector<double> snr_points_db = {0.0, 2.0, 4.0};
  int max_iters = 25;
  std::uint64_t base_seed = 1;
};

struct HammingStudyRow {
  double snr_db = 0.0;
  long packets = 0;
  long bit_errors_factor = 0;
  long bit_errors_cluster = 0;
  long bit_errors_exact = 0;
  double ber_factor = 0.0;
  double ber_cluster = 0.0;
  double ber_exact = 0.0;
  // Per-packet total KL divergence of graph marginals from exact inference.
  double kl_median_factor = 0.0, kl_q1_factor = 0.0, kl_q3_factor = 0.0;
  double kl_median_cluster = 0.0, kl_q1_cluster = 0.0, kl_q3_cluster = 0.0;
  double frac_multi_iter_factor = 0.0;
  double frac_multi_iter_cluster = 0.0;
};

struct ComparisonReport {
  OpCounter factor_iteration_ops;
  OpCounter cluster_iteration_ops;
  std::vector<HammingStudyRow> rows;
  std::uint64_t base_seed = 0;
};

/// Small-code study: per packet, decode with both graph representations and
/// compare against brute-force exact inference (BER, total KL divergence,
/// fraction of packets needing more than one iteration).
ComparisonReport run_hamming_study(const CompiledCode& code, const HammingStudyConfig& cfg);

std::string hamming_study_csv(const ComparisonReport& report);
std::string hamming_study_text(const ComparisonReport& report);

}  // namespace ldpcpgm

#endif  // LDPCPGM_BENCH_HPP
