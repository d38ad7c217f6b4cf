#ifndef LDPCPGM_ENGINE_HPP
#define LDPCPGM_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ldpcpgm/factor.hpp"
#include "ldpcpgm/graph.hpp"

namespace ldpcpgm {

/// Inference reached an all-zero belief: the attached evidence contradicts
/// the factors and the decode aborts as a failure.
struct DecodeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DirectedMessage {
  int source = 0;
  int target = 0;
  int sepset = 0;  // index into ClusterGraph::sepsets

  bool operator==(const DirectedMessage&) const = default;
};

/// Layered traversal defining one iteration of message passing. Each
/// undirected edge appears exactly once per sweep; the backward sweep is the
/// forward sweep reversed with directions flipped.
struct MessageSchedule {
  std::vector<std::vector<int>> layers;  // layer 0 = seeds
  std::vector<DirectedMessage> forward;
  std::vector<DirectedMessage> backward;
};

enum class SweepDirection { forward, backward };

/// Breadth-first layering from the seed clusters. The forward sweep runs
/// from the far (evidence-bearing) layer toward the seeds, the backward
/// sweep mirrors it. Within a sweep a layer's internal edges fire after the
/// inter-layer edges arriving into it, ordered by endpoint ids. On a Bethe
/// graph seeded at the parity clusters this is the classic flooding order:
/// the variable-to-check half first. Throws if any cluster is unreachable
/// from the seeds.
MessageSchedule build_layered_schedule(const ClusterGraph& graph, const std::vector<int>& seeds);

/// Default seed rule: all clusters whose cardinality is one of the two
/// largest distinct cardinalities in the graph.
std::vector<int> largest_cluster_seeds(const ClusterGraph& graph);

/// Which cluster absorbs each bit's channel likelihood. Bits are claimed
/// scanning layers from the farthest inward, within a layer by ascending
/// cluster cardinality then id, so evidence enters the graph from the far
/// end and never attaches to an intermediate layer a farther layer could
/// serve. Each bit is attached exactly once.
struct EvidenceMap {
  std::vector<int> cluster_of_bit;           // index = bit
  std::vector<DiscreteFactor> likelihoods;   // index = bit, univariate
};

EvidenceMap attach_evidence(const ClusterGraph& graph, const MessageSchedule& schedule,
                            std::vector<DiscreteFactor> likelihoods);

/// Mutable per-session inference state; one decode session owns one.
struct BeliefState {
  std::vector<DiscreteFactor> cluster_beliefs;
  std::vector<DiscreteFactor> sepset_beliefs;
};

/// Cluster beliefs from initial factors with evidence multiplied in once;
/// sepset beliefs start as uniform-ones.
BeliefState init_beliefs(const ClusterGraph& graph, const EvidenceMap& evidence,
                         OpCounter* ops = nullptr);

/// One belief-update sweep: for each directed edge (Ci -> Cj over S),
///   mu      = marginalize(belief(Ci), vars(S))
///   belief(Cj) = normalize(belief(Cj) * (mu / belief(S)))
///   belief(S)  = normalize(mu)
/// Zero entries are pruned from every result and never reintroduced.
void lbu_sweep(const ClusterGraph& graph, const MessageSchedule& schedule,
               SweepDirection direction, BeliefState& state, OpCounter* ops = nullptr);

enum class StopRule { message_match, syndrome_zero, fixed_iters };
enum class StoppedBy { message_match, syndrome_zero, max_iters };

struct DecodeResult {
  std::vector<DiscreteFactor> bit_marginals;  // normalized, one per bit
  int iterations_used = 0;
  StoppedBy stopped_by = StoppedBy::max_iters;
  OpCounter ops;
  // First iteration whose hard-decided message equalled the truth, 0 if it
  // never did (or no truth was given). Under message_match stopping this is
  // iterations_used; under a fixed budget it still records when the decoder
  // first reached the message.
  int first_match_iteration = 0;
};

/// Hard decision on a normalized binary marginal: 1 iff P(b=1) > 0.5,
/// ties decide 0.
std::uint8_t hard_bit(const DiscreteFactor& marginal);

/// Full decode loop: initialize, then (forward sweep, backward sweep,
/// extract marginals, test stop rule) up to max_iters.
///
/// truth carries the transmitted message bits occupying the leading codeword
/// positions; it is required by the message_match rule. syndrome_zero stops
/// when the hard decision satisfies every cluster's initial factor.
DecodeResult run_decoder(const ClusterGraph& graph, const MessageSchedule& schedule,
                         const std::vector<DiscreteFactor>& likelihoods,
                         const std::optional<std::vector<std::uint8_t>>& truth, int max_iters,
                         StopRule rule);

/// Brute-force oracle: enumerates all 2^n bit vectors, weights each by the
/// product of all factors and likelihoods, and accumulates normalized
/// per-bit marginals. No graph involved. Refuses n > 24.
std::vector<DiscreteFactor> exact_marginals(const std::vector<DiscreteFactor>& factors,
                                            const std::vector<DiscreteFactor>& likelihoods,
                                            int n_bits);

}  // namespace ldpcpgm

#endif  // LDPCPGM_ENGINE_HPP
