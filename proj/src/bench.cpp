#include "ldpcpgm/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace ldpcpgm {

namespace {

// Seed scrambler so the message stream and the noise stream of a packet are
// decorrelated even though both derive from the same per-packet seed.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::vector<std::uint8_t> random_message(int k, std::uint64_t packet_seed) {
  std::mt19937_64 gen(splitmix64(packet_seed));
  std::vector<std::uint8_t> m(k);
  for (int i = 0; i < k; ++i) m[i] = static_cast<std::uint8_t>(gen() & 1);
  return m;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double percentile(std::vector<double>& values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double idx = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = idx - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

struct GraphTally {
  long bit_errors = 0;
  long iter_sum = 0;
  long multi_iter = 0;
  long failures = 0;
  long matched = 0;
  long matched_iter_sum = 0;
};

}  // namespace

CompiledCode::CompiledCode(const ParityCheckMatrix& matrix)
    : h(matrix),
      encoder(matrix),
      factor_graph([&] {
        std::vector<VariableId> all_vars(matrix.n_cols);
        std::iota(all_vars.begin(), all_vars.end(), 0u);
        return build_bethe_graph(parity_factors_from_h(matrix), all_vars);
      }()) {
  // The Bethe schedule seeds on all parity clusters; the variable clusters
  // form the single far layer where the evidence attaches.
  std::vector<int> parity_ids(matrix.n_rows());
  std::iota(parity_ids.begin(), parity_ids.end(), 0);
  factor_schedule = build_layered_schedule(factor_graph, parity_ids);

  cluster_graph = ltrip_compile(parity_factors_from_h(matrix));
  cluster_schedule = build_layered_schedule(cluster_graph, largest_cluster_seeds(cluster_graph));

  // Message-match stopping and error counting assume the message bits sit on
  // the leading codeword positions, which holds for the shipped fixtures.
  for (int i = 0; i < encoder.k(); ++i) {
    if (encoder.message_positions()[i] != i) {
      throw std::runtime_error("CompiledCode: message bits are not the leading columns");
    }
  }
}

std::vector<std::uint8_t> hard_decision(const std::vector<DiscreteFactor>& marginals) {
  std::vector<std::uint8_t> bits(marginals.size());
  for (std::size_t i = 0; i < marginals.size(); ++i) bits[i] = hard_bit(marginals[i]);
  return bits;
}

OpCounter profile_single_iteration(const ClusterGraph& graph, const MessageSchedule& schedule,
                                   const std::vector<DiscreteFactor>& likelihoods) {
  const EvidenceMap ev = attach_evidence(graph, schedule, likelihoods);
  BeliefState state = init_beliefs(graph, ev, nullptr);
  OpCounter ops;
  lbu_sweep(graph, schedule, SweepDirection::forward, state, &ops);
  lbu_sweep(graph, schedule, SweepDirection::backward, state, &ops);
  return ops;
}

namespace {

// Decodes one packet on one graph and folds the outcome into the tally.
// Returns the marginals (empty on failure) for callers that need them.
std::vector<DiscreteFactor> tally_decode(const ClusterGraph& graph,
                                         const MessageSchedule& schedule,
                                         const std::vector<DiscreteFactor>& evidence,
                                         const std::vector<std::uint8_t>& message, int max_iters,
                                         StopRule stop, GraphTally& tally) {
  const int k = static_cast<int>(message.size());
  try {
    DecodeResult r = run_decoder(graph, schedule, evidence, message, max_iters, stop);
    for (int i = 0; i < k; ++i) {
      if (hard_bit(r.bit_marginals[i]) != message[i]) ++tally.bit_errors;
    }
    tally.iter_sum += r.iterations_used;
    if (r.iterations_used > 1) ++tally.multi_iter;
    if (r.first_match_iteration > 0) {
      ++tally.matched;
      tally.matched_iter_sum += r.first_match_iteration;
    }
    return std::move(r.bit_marginals);
  } catch (const DecodeFailure&) {
    // Contradictory evidence cannot occur with soft channel likelihoods;
    // count the packet as fully errored if it ever does.
    ++tally.failures;
    tally.bit_errors += k;
    tally.iter_sum += max_iters;
    ++tally.multi_iter;
    return {};
  }
}

}  // namespace

std::vector<SweepRow> run_ber_sweep(const CompiledCode& code, const SweepConfig& cfg,
                                    std::vector<SweepIterationStats>* stats) {
  if (cfg.snr_points < 1 || cfg.packets < 1) {
    throw std::invalid_argument("sweep: need at least one SNR point and one packet");
  }
  if (cfg.snr_lo_db > cfg.snr_hi_db) {
    throw std::invalid_argument("sweep: snr_lo_db must not exceed snr_hi_db");
  }
  const bool want_factor = cfg.graphs != GraphSelection::cluster;
  const bool want_cluster = cfg.graphs != GraphSelection::factor;
  const int k = code.encoder.k();
  const double rate = code.encoder.parameters().rate();

  std::vector<double> grid(cfg.snr_points);
  for (int j = 0; j < cfg.snr_points; ++j) {
    grid[j] = cfg.snr_points == 1 ? cfg.snr_lo_db
                                  : cfg.snr_lo_db + (cfg.snr_hi_db - cfg.snr_lo_db) * j /
                                                        (cfg.snr_points - 1);
  }

  std::vector<GraphTally> factor_tally(cfg.snr_points), cluster_tally(cfg.snr_points);
  for (int j = 0; j < cfg.snr_points; ++j) {
    ChannelConfig ch{sigma2_for_snr_db(grid[j], rate), 1.0, rate};
    for (long i = 0; i < cfg.packets; ++i) {
      const std::uint64_t packet_seed =
          cfg.base_seed + static_cast<std::uint64_t>(j) * cfg.packets + i;
      const auto message = random_message(k, packet_seed);
      const auto codeword = code.encoder.encode(message);
      const auto received = transmit(codeword, ch, packet_seed);
      const auto evidence = likelihood_evidence(received, ch);
      if (want_factor) {
        tally_decode(code.factor_graph, code.factor_schedule, evidence, message, cfg.max_iters,
                     cfg.stop, factor_tally[j]);
      }
      if (want_cluster) {
        tally_decode(code.cluster_graph, code.cluster_schedule, evidence, message, cfg.max_iters,
                     cfg.stop, cluster_tally[j]);
      }
    }
  }

  std::vector<SweepRow> rows;
  if (stats) stats->clear();
  auto emit = [&](const char* name, const std::vector<GraphTally>& tallies) {
    for (int j = 0; j < cfg.snr_points; ++j) {
      const GraphTally& t = tallies[j];
      SweepRow row;
      row.graph = name;
      row.snr_db = grid[j];
      row.packets = cfg.packets;
      row.bit_errors = t.bit_errors;
      row.ber = static_cast<double>(t.bit_errors) / (static_cast<double>(cfg.packets) * k);
      row.avg_iterations = static_cast<double>(t.iter_sum) / cfg.packets;
      row.frac_multi_iter = static_cast<double>(t.multi_iter) / cfg.packets;
      row.failures = t.failures;
      row.seed = cfg.base_seed;
      rows.push_back(std::move(row));
      if (stats) stats->push_back({name, grid[j], t.matched, t.matched_iter_sum});
    }
  };
  if (want_factor) emit("factor", factor_tally);
  if (want_cluster) emit("cluster", cluster_tally);
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "graph,snr_db,packets,bit_errors,ber,avg_iterations,frac_multi_iter,failures,seed\n";
  for (const SweepRow& r : rows) {
    os << r.graph << ',' << format_double(r.snr_db) << ',' << r.packets << ',' << r.bit_errors
       << ',' << format_double(r.ber) << ',' << format_double(r.avg_iterations) << ','
       << format_double(r.frac_multi_iter) << ',' << r.failures << ',' << r.seed << '\n';
  }
  return os.str();
}

ComparisonReport run_hamming_study(const CompiledCode& code, const HammingStudyConfig& cfg) {
  if (cfg.packets < 1) throw std::invalid_argument("study: need at least one packet");
  if (code.h.n_cols > 24) {
    throw std::invalid_argument("study: exact inference needs a short code (N <= 24)");
  }
  const int k = code.encoder.k();
  const int n = code.h.n_cols;
  const double rate = code.encoder.parameters().rate();
  const auto factors = parity_factors_from_h(code.h);

  ComparisonReport report;
  report.base_seed = cfg.base_seed;

  {
    // Single-iteration operation counts, independent of the evidence.
    ChannelConfig ch{sigma2_for_snr_db(cfg.snr_points_db.empty() ? 0.0 : cfg.snr_points_db[0],
                                       rate),
                     1.0, rate};
    const auto codeword = code.encoder.encode(std::vector<std::uint8_t>(k, 0));
    const auto evidence = likelihood_evidence(transmit(codeword, ch, cfg.base_seed), ch);
    report.factor_iteration_ops =
        profile_single_iteration(code.factor_graph, code.factor_schedule, evidence);
    report.cluster_iteration_ops =
        profile_single_iteration(code.cluster_graph, code.cluster_schedule, evidence);
  }

  for (std::size_t p = 0; p < cfg.snr_points_db.size(); ++p) {
    ChannelConfig ch{sigma2_for_snr_db(cfg.snr_points_db[p], rate), 1.0, rate};
    GraphTally factor_tally, cluster_tally;
    long exact_errors = 0;
    std::vector<double> kl_factor(cfg.packets), kl_cluster(cfg.packets);

    for (long i = 0; i < cfg.packets; ++i) {
      const std::uint64_t packet_seed =
          cfg.base_seed + static_cast<std::uint64_t>(p) * cfg.packets + i;
      const auto message = random_message(k, packet_seed);
      const auto codeword = code.encoder.encode(message);
      const auto received = transmit(codeword, ch, packet_seed);
      const auto evidence = likelihood_evidence(received, ch);

      const auto exact = exact_marginals(factors, evidence, n);
      for (int b = 0; b < k; ++b) {
        if (hard_bit(exact[b]) != message[b]) ++exact_errors;
      }

      // Fixed iteration budget for the BER and KL comparison; the recorded
      // first-match iteration feeds the convergence fraction. Stopping at the
      // match instead would hand both graphs a best-of-25 selection advantage
      // over the exact-inference baseline.
      auto study_decode = [&](const ClusterGraph& graph, const MessageSchedule& schedule,
                              GraphTally& tally) -> std::vector<DiscreteFactor> {
        try {
          DecodeResult r = run_decoder(graph, schedule, evidence, message, cfg.max_iters,
                                       StopRule::fixed_iters);
          for (int b = 0; b < k; ++b) {
            if (hard_bit(r.bit_marginals[b]) != message[b]) ++tally.bit_errors;
          }
          if (r.first_match_iteration != 1) ++tally.multi_iter;
          tally.iter_sum +=
              r.first_match_iteration > 0 ? r.first_match_iteration : cfg.max_iters;
          return std::move(r.bit_marginals);
        } catch (const DecodeFailure&) {
          ++tally.failures;
          tally.bit_errors += k;
          tally.iter_sum += cfg.max_iters;
          ++tally.multi_iter;
          return {};
        }
      };
      const auto mf = study_decode(code.factor_graph, code.factor_schedule, factor_tally);
      const auto mc = study_decode(code.cluster_graph, code.cluster_schedule, cluster_tally);

      double klf = 0.0, klc = 0.0;
      for (int b = 0; b < n; ++b) {
        if (!mf.empty()) klf += kl_divergence(exact[b], mf[b]);
        if (!mc.empty()) klc += kl_divergence(exact[b], mc[b]);
      }
      kl_factor[i] = klf;
      kl_cluster[i] = klc;
    }

    HammingStudyRow row;
    row.snr_db = cfg.snr_points_db[p];
    row.packets = cfg.packets;
    const double total_bits = static_cast<double>(cfg.packets) * k;
    row.bit_errors_factor = factor_tally.bit_errors;
    row.bit_errors_cluster = cluster_tally.bit_errors;
    row.bit_errors_exact = exact_errors;
    row.ber_factor = factor_tally.bit_errors / total_bits;
    row.ber_cluster = cluster_tally.bit_errors / total_bits;
    row.ber_exact = exact_errors / total_bits;
    row.kl_median_factor = percentile(kl_factor, 0.5);
    row.kl_q1_factor = percentile(kl_factor, 0.25);
    row.kl_q3_factor = percentile(kl_factor, 0.75);
    row.kl_median_cluster = percentile(kl_cluster, 0.5);
    row.kl_q1_cluster = percentile(kl_cluster, 0.25);
    row.kl_q3_cluster = percentile(kl_cluster, 0.75);
    row.frac_multi_iter_factor = static_cast<double>(factor_tally.multi_iter) / cfg.packets;
    row.frac_multi_iter_cluster = static_cast<double>(cluster_tally.multi_iter) / cfg.packets;
    report.rows.push_back(row);
  }
  return report;
}

std::string hamming_study_csv(const ComparisonReport& report) {
  std::ostringstream os;
  os << "graph,snr_db,packets,bit_errors,ber,ber_exact,kl_median,kl_q1,kl_q3,"
        "frac_multi_iter,adds_per_iter,mults_per_iter,seed\n";
  for (const HammingStudyRow& r : report.rows) {
    os << "factor," << format_double(r.snr_db) << ',' << r.packets << ',' << r.bit_errors_factor
       << ',' << format_double(r.ber_factor) << ',' << format_double(r.ber_exact) << ','
       << format_double(r.kl_median_factor) << ',' << format_double(r.kl_q1_factor) << ','
       << format_double(r.kl_q3_factor) << ',' << format_double(r.frac_multi_iter_factor) << ','
       << report.factor_iteration_ops.additions << ','
       << report.factor_iteration_ops.multiplications << ',' << report.base_seed << '\n';
    os << "cluster," << format_double(r.snr_db) << ',' << r.packets << ','
       << r.bit_errors_cluster << ',' << format_double(r.ber_cluster) << ','
       << format_double(r.ber_exact) << ',' << format_double(r.kl_median_cluster) << ','
       << format_double(r.kl_q1_cluster) << ',' << format_double(r.kl_q3_cluster) << ','
       << format_double(r.frac_multi_iter_cluster) << ','
       << report.cluster_iteration_ops.additions << ','
       << report.cluster_iteration_ops.multiplications << ',' << report.base_seed << '\n';
  }
  return os.str();
}

std::string hamming_study_text(const ComparisonReport& report) {
  std::ostringstream os;
  os << "One message-passing iteration:\n";
  os << "  factor graph : " << report.factor_iteration_ops.additions << " additions, "
     << report.factor_iteration_ops.multiplications << " multiplications\n";
  os << "  cluster graph: " << report.cluster_iteration_ops.additions << " additions, "
     << report.cluster_iteration_ops.multiplications << " multiplications\n\n";
  for (const HammingStudyRow& r : report.rows) {
    os << "SNR " << format_double(r.snr_db) << " dB (" << r.packets << " packets)\n";
    os << "  BER            exact " << format_double(r.ber_exact) << "  factor "
       << format_double(r.ber_factor) << "  cluster " << format_double(r.ber_cluster) << '\n';
    os << "  KL median      factor " << format_double(r.kl_median_factor) << "  cluster "
       << format_double(r.kl_median_cluster) << '\n';
    os << "  >1 iteration   factor " << format_double(r.frac_multi_iter_factor) << "  cluster "
       << format_double(r.frac_multi_iter_cluster) << '\n';
  }
  return os.str();
}

}  // namespace ldpcpgm
