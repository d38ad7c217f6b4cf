#ifndef LDPCPGM_GRAPH_HPP
#define LDPCPGM_GRAPH_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ldpcpgm/factor.hpp"

namespace ldpcpgm {

enum class GraphKind { bethe, ltrip };

/// A cluster node: a set of variables plus the factor it starts out with
/// (uniform-ones when the cluster exists only for structure).
struct Cluster {
  int id = 0;
  std::vector<VariableId> variables;  // ascending
  DiscreteFactor initial_factor;
};

/// An edge label: the variables shared between a pair of clusters over which
/// messages travel. Endpoints are ordered a < b.
struct Sepset {
  int a = 0;
  int b = 0;
  std::vector<VariableId> variables;  // ascending, non-empty
};

struct ClusterGraph {
  GraphKind kind = GraphKind::bethe;
  std::vector<Cluster> clusters;
  std::vector<Sepset> sepsets;

  /// Sepset indices incident to each cluster, ascending.
  std::vector<std::vector<int>> adjacency() const;

  int other_endpoint(int sepset_index, int cluster_id) const {
    const Sepset& s = sepsets[sepset_index];
    return s.a == cluster_id ? s.b : s.a;
  }
};

/// Factor-graph representation in cluster-graph form: one cluster per factor,
/// one uniform-ones cluster per variable, and a univariate sepset between a
/// factor cluster and the cluster of each variable in its scope.
ClusterGraph build_bethe_graph(const std::vector<DiscreteFactor>& factors,
                               const std::vector<VariableId>& all_vars);

/// Compiles a cluster graph from the factors by building, for each variable
/// in ascending order, a maximum-weight spanning tree over the clusters
/// containing it, and merging the selected edges' labels across all variable
/// layers. Edge weights favour large scope overlaps and reuse of edges picked
/// in earlier layers, so sepsets merge into multivariate labels. The result
/// satisfies the running intersection property for every variable.
ClusterGraph ltrip_compile(const std::vector<DiscreteFactor>& factors);

/// True iff the edges whose sepset contains v form a tree spanning every
/// cluster that contains v (connected and acyclic).
bool verify_rip(const ClusterGraph& graph, VariableId v);

/// Plain-text structure dump: one line per cluster (id and sorted variables),
/// one line per sepset (endpoint ids and sorted variables).
void dump_graph(const ClusterGraph& graph, std::ostream& os);
std::string dump_graph(const ClusterGraph& graph);

}  // namespace ldpcpgm

#endif  // LDPCPGM_GRAPH_HPP
