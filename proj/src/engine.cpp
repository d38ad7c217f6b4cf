#include "ldpcpgm/engine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace ldpcpgm {

namespace {

std::vector<DirectedMessage> reversed_flipped(const std::vector<DirectedMessage>& msgs) {
  std::vector<DirectedMessage> out;
  out.reserve(msgs.size());
  for (auto it = msgs.rbegin(); it != msgs.rend(); ++it) {
    out.push_back({it->target, it->source, it->sepset});
  }
  return out;
}

}  // namespace

MessageSchedule build_layered_schedule(const ClusterGraph& graph, const std::vector<int>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("schedule: empty seed list");
  const int n = static_cast<int>(graph.clusters.size());
  std::vector<int> layer_of(n, -1);

  MessageSchedule sched;
  std::vector<int> layer0(seeds);
  std::sort(layer0.begin(), layer0.end());
  layer0.erase(std::unique(layer0.begin(), layer0.end()), layer0.end());
  for (int s : layer0) {
    if (s < 0 || s >= n) throw std::invalid_argument("schedule: seed cluster does not exist");
    layer_of[s] = 0;
  }
  sched.layers.push_back(layer0);

  const auto adj = graph.adjacency();
  while (true) {
    std::set<int> next;
    for (int c : sched.layers.back()) {
      for (int s : adj[c]) {
        const int o = graph.other_endpoint(s, c);
        if (layer_of[o] < 0) next.insert(o);
      }
    }
    if (next.empty()) break;
    const int l = static_cast<int>(sched.layers.size());
    for (int c : next) layer_of[c] = l;
    sched.layers.emplace_back(next.begin(), next.end());
  }
  for (int c = 0; c < n; ++c) {
    if (layer_of[c] < 0) {
      throw std::invalid_argument("schedule: cluster " + std::to_string(c) +
                                  " unreachable from the seeds");
    }
  }

  // Far-to-seed order: each layer first mixes internally (after receiving
  // from the farther layer), then sends inward.
  const int last = static_cast<int>(sched.layers.size()) - 1;
  std::vector<DirectedMessage> far_to_seed;
  for (int l = last; l >= 0; --l) {
    std::vector<DirectedMessage> intra, inter;
    for (std::size_t s = 0; s < graph.sepsets.size(); ++s) {
      const Sepset& e = graph.sepsets[s];
      const int la = layer_of[e.a], lb = layer_of[e.b];
      if (la == l && lb == l) {
        intra.push_back({std::min(e.a, e.b), std::max(e.a, e.b), static_cast<int>(s)});
      } else if (la == l && lb == l - 1) {
        inter.push_back({e.a, e.b, static_cast<int>(s)});
      } else if (lb == l && la == l - 1) {
        inter.push_back({e.b, e.a, static_cast<int>(s)});
      } else if (std::abs(la - lb) > 1) {
        throw std::logic_error("schedule: non-adjacent layers share an edge");
      }
    }
    auto by_ids = [](const DirectedMessage& x, const DirectedMessage& y) {
      return std::tie(x.source, x.target) < std::tie(y.source, y.target);
    };
    std::sort(intra.begin(), intra.end(), by_ids);
    std::sort(inter.begin(), inter.end(), by_ids);
    far_to_seed.insert(far_to_seed.end(), intra.begin(), intra.end());
    far_to_seed.insert(far_to_seed.end(), inter.begin(), inter.end());
  }

  sched.forward = far_to_seed;
  sched.backward = reversed_flipped(far_to_seed);
  return sched;
}

std::vector<int> largest_cluster_seeds(const ClusterGraph& graph) {
  std::set<std::size_t, std::greater<>> sizes;
  for (const Cluster& c : graph.clusters) sizes.insert(c.variables.size());
  std::set<std::size_t> top;
  for (std::size_t s : sizes) {
    top.insert(s);
    if (top.size() == 2) break;
  }
  std::vector<int> seeds;
  for (const Cluster& c : graph.clusters) {
    if (top.count(c.variables.size())) seeds.push_back(c.id);
  }
  return seeds;
}

EvidenceMap attach_evidence(const ClusterGraph& graph, const MessageSchedule& schedule,
                            std::vector<DiscreteFactor> likelihoods) {
  const int n_bits = static_cast<int>(likelihoods.size());
  for (int b = 0; b < n_bits; ++b) {
    if (likelihoods[b].scope() != std::vector<VariableId>{static_cast<VariableId>(b)}) {
      throw std::invalid_argument("attach_evidence: likelihood " + std::to_string(b) +
                                  " must be univariate over bit " + std::to_string(b));
    }
  }

  EvidenceMap ev;
  ev.cluster_of_bit.assign(n_bits, -1);
  ev.likelihoods = std::move(likelihoods);

  for (auto layer = schedule.layers.rbegin(); layer != schedule.layers.rend(); ++layer) {
    std::vector<int> order(*layer);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const auto sa = graph.clusters[a].variables.size();
      const auto sb = graph.clusters[b].variables.size();
      return std::tie(sa, a) < std::tie(sb, b);
    });
    for (int c : order) {
      for (VariableId v : graph.clusters[c].variables) {
        if (static_cast<int>(v) >= n_bits) {
          throw std::invalid_argument("attach_evidence: cluster variable " + std::to_string(v) +
                                      " has no likelihood");
        }
        if (ev.cluster_of_bit[v] < 0) ev.cluster_of_bit[v] = c;
      }
    }
  }
  for (int b = 0; b < n_bits; ++b) {
    if (ev.cluster_of_bit[b] < 0) {
      throw std::invalid_argument("attach_evidence: bit " + std::to_string(b) +
                                  " appears in no cluster");
    }
  }
  return ev;
}

BeliefState init_beliefs(const ClusterGraph& graph, const EvidenceMap& evidence, OpCounter* ops) {
  BeliefState state;
  state.cluster_beliefs.reserve(graph.clusters.size());
  for (const Cluster& c : graph.clusters) state.cluster_beliefs.push_back(c.initial_factor);

  for (std::size_t b = 0; b < evidence.likelihoods.size(); ++b) {
    const int c = evidence.cluster_of_bit[b];
    state.cluster_beliefs[c] = state.cluster_beliefs[c].product(evidence.likelihoods[b], ops);
  }
  for (DiscreteFactor& f : state.cluster_beliefs) {
    if (f.empty()) throw DecodeFailure("contradictory evidence: all-zero initial belief");
    f = f.normalized();
  }
  state.sepset_beliefs.reserve(graph.sepsets.size());
  for (const Sepset& s : graph.sepsets) {
    state.sepset_beliefs.push_back(DiscreteFactor::uniform_ones(s.variables));
  }
  return state;
}

void lbu_sweep(const ClusterGraph& graph, const MessageSchedule& schedule,
               SweepDirection direction, BeliefState& state, OpCounter* ops) {
  const auto& msgs =
      direction == SweepDirection::forward ? schedule.forward : schedule.backward;
  for (const DirectedMessage& m : msgs) {
    const Sepset& s = graph.sepsets[m.sepset];
    const DiscreteFactor mu = state.cluster_beliefs[m.source].marginalize(s.variables, ops);
    if (mu.empty()) throw DecodeFailure("all-zero message (contradictory evidence)");
    const DiscreteFactor quotient = mu.divide(state.sepset_beliefs[m.sepset], ops);
    DiscreteFactor updated = state.cluster_beliefs[m.target].product(quotient, ops);
    if (updated.empty()) throw DecodeFailure("all-zero cluster belief (contradictory evidence)");
    state.cluster_beliefs[m.target] = updated.normalized();
    state.sepset_beliefs[m.sepset] = mu.normalized();
  }
}

std::uint8_t hard_bit(const DiscreteFactor& marginal) {
  if (marginal.scope().size() != 1) {
    throw std::invalid_argument("hard_bit: expected a univariate marginal");
  }
  return marginal.at_key(1) > 0.5 ? 1 : 0;
}

namespace {

std::vector<DiscreteFactor> extract_marginals(const BeliefState& state, const EvidenceMap& ev) {
  std::vector<DiscreteFactor> out;
  out.reserve(ev.cluster_of_bit.size());
  for (std::size_t b = 0; b < ev.cluster_of_bit.size(); ++b) {
    out.push_back(state.cluster_beliefs[ev.cluster_of_bit[b]]
                      .marginalize({static_cast<VariableId>(b)})
                      .normalized());
  }
  return out;
}

bool syndrome_satisfied(const ClusterGraph& graph, const std::vector<std::uint8_t>& bits) {
  for (const Cluster& c : graph.clusters) {
    std::uint32_t key = 0;
    for (std::size_t i = 0; i < c.variables.size(); ++i) {
      key |= static_cast<std::uint32_t>(bits[c.variables[i]] & 1) << i;
    }
    if (c.initial_factor.at_key(key) == 0.0) return false;
  }
  return true;
}

}  // namespace

DecodeResult run_decoder(const ClusterGraph& graph, const MessageSchedule& schedule,
                         const std::vector<DiscreteFactor>& likelihoods,
                         const std::optional<std::vector<std::uint8_t>>& truth, int max_iters,
                         StopRule rule) {
  if (max_iters < 1) throw std::invalid_argument("run_decoder: max_iters must be >= 1");
  if (rule == StopRule::message_match && !truth) {
    throw std::invalid_argument("run_decoder: message_match stopping needs the true message");
  }

  DecodeResult result;
  const EvidenceMap ev = attach_evidence(graph, schedule, likelihoods);
  BeliefState state = init_beliefs(graph, ev, &result.ops);

  for (int iter = 1; iter <= max_iters; ++iter) {
    lbu_sweep(graph, schedule, SweepDirection::forward, state, &result.ops);
    lbu_sweep(graph, schedule, SweepDirection::backward, state, &result.ops);
    result.bit_marginals = extract_marginals(state, ev);
    result.iterations_used = iter;

    if (truth && result.first_match_iteration == 0) {
      bool match = true;
      for (std::size_t i = 0; i < truth->size() && match; ++i) {
        match = hard_bit(result.bit_marginals[i]) == ((*truth)[i] & 1);
      }
      if (match) result.first_match_iteration = iter;
    }
    if (rule == StopRule::message_match) {
      if (result.first_match_iteration == iter) {
        result.stopped_by = StoppedBy::message_match;
        return result;
      }
    } else if (rule == StopRule::syndrome_zero) {
      std::vector<std::uint8_t> bits(result.bit_marginals.size());
      for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = hard_bit(result.bit_marginals[i]);
      if (syndrome_satisfied(graph, bits)) {
        result.stopped_by = StoppedBy::syndrome_zero;
        return result;
      }
    }
  }
  result.stopped_by = StoppedBy::max_iters;
  return result;
}

std::vector<DiscreteFactor> exact_marginals(const std::vector<DiscreteFactor>& factors,
                                            const std::vector<DiscreteFactor>& likelihoods,
                                            int n_bits) {
  if (n_bits < 1 || n_bits > 24) {
    throw std::invalid_argument("exact_marginals: refusing enumeration over " +
                                std::to_string(n_bits) + " bits");
  }
  for (int b = 0; b < n_bits; ++b) {
    if (likelihoods[b].scope() != std::vector<VariableId>{static_cast<VariableId>(b)}) {
      throw std::invalid_argument("exact_marginals: likelihood " + std::to_string(b) +
                                  " must be univariate over bit " + std::to_string(b));
    }
  }

  // Dense views for speed: factor tables plus per-bit likelihood pairs.
  struct DenseView {
    std::vector<int> positions;
    std::vector<double> table;
  };
  std::vector<DenseView> views;
  views.reserve(factors.size());
  for (const DiscreteFactor& f : factors) {
    DenseView v;
    for (VariableId var : f.scope()) {
      if (static_cast<int>(var) >= n_bits) {
        throw std::invalid_argument("exact_marginals: factor variable out of range");
      }
      v.positions.push_back(static_cast<int>(var));
    }
    v.table.assign(std::size_t{1} << f.scope().size(), 0.0);
    for (const auto& e : f.entries()) v.table[e.key] = e.value;
    views.push_back(std::move(v));
  }
  std::vector<double> lik0(n_bits), lik1(n_bits);
  for (int b = 0; b < n_bits; ++b) {
    lik0[b] = likelihoods[b].at_key(0);
    lik1[b] = likelihoods[b].at_key(1);
  }

  std::vector<double> mass0(n_bits, 0.0), mass1(n_bits, 0.0);
  const std::uint32_t total = 1u << n_bits;
  for (std::uint32_t a = 0; a < total; ++a) {
    double w = 1.0;
    for (const DenseView& v : views) {
      std::uint32_t key = 0;
      for (std::size_t i = 0; i < v.positions.size(); ++i) {
        key |= ((a >> v.positions[i]) & 1u) << i;
      }
      w *= v.table[key];
      if (w == 0.0) break;
    }
    if (w == 0.0) continue;
    for (int b = 0; b < n_bits; ++b) w *= (a >> b) & 1u ? lik1[b] : lik0[b];
    if (w == 0.0) continue;
    for (int b = 0; b < n_bits; ++b) {
      ((a >> b) & 1u ? mass1[b] : mass0[b]) += w;
    }
  }

  std::vector<DiscreteFactor> out;
  out.reserve(n_bits);
  for (int b = 0; b < n_bits; ++b) {
    const double total_mass = mass0[b] + mass1[b];
    if (!(total_mass > 0.0)) {
      throw DecodeFailure("exact_marginals: evidence contradicts the factors");
    }
    std::vector<DiscreteFactor::Entry> entries;
    if (mass0[b] > 0.0) entries.push_back({0u, mass0[b] / total_mass});
    if (mass1[b] > 0.0) entries.push_back({1u, mass1[b] / total_mass});
    out.push_back(DiscreteFactor({static_cast<VariableId>(b)}, std::move(entries)));
  }
  return out;
}

}  // namespace ldpcpgm
