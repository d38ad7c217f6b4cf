#include "ldpcpgm/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ldpcpgm {

namespace {

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

std::size_t overlap_size(const std::vector<VariableId>& a, const std::vector<VariableId>& b) {
  std::size_t n = 0, i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

std::vector<std::vector<int>> ClusterGraph::adjacency() const {
  std::vector<std::vector<int>> adj(clusters.size());
  for (std::size_t s = 0; s < sepsets.size(); ++s) {
    adj[sepsets[s].a].push_back(static_cast<int>(s));
    adj[sepsets[s].b].push_back(static_cast<int>(s));
  }
  return adj;
}

ClusterGraph build_bethe_graph(const std::vector<DiscreteFactor>& factors,
                               const std::vector<VariableId>& all_vars) {
  std::vector<VariableId> vars(all_vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  std::map<VariableId, int> var_cluster;
  const int n_factors = static_cast<int>(factors.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    var_cluster[vars[i]] = n_factors + static_cast<int>(i);
  }

  ClusterGraph g;
  g.kind = GraphKind::bethe;
  for (int i = 0; i < n_factors; ++i) {
    for (VariableId v : factors[i].scope()) {
      if (!var_cluster.count(v)) {
        throw std::invalid_argument("factor variable " + std::to_string(v) +
                                    " missing from all_vars");
      }
    }
    g.clusters.push_back({i, factors[i].scope(), factors[i]});
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    // Variable clusters carry uniform factors so the graph still represents
    // the original product of factors.
    g.clusters.push_back({n_factors + static_cast<int>(i),
                          {vars[i]},
                          DiscreteFactor::uniform_ones({vars[i]})});
  }
  for (int i = 0; i < n_factors; ++i) {
    for (VariableId v : factors[i].scope()) {
      g.sepsets.push_back({i, var_cluster[v], {v}});
    }
  }
  return g;
}

ClusterGraph ltrip_compile(const std::vector<DiscreteFactor>& factors) {
  if (factors.empty()) {
    throw std::invalid_argument("ltrip_compile: need at least one factor");
  }
  const int n = static_cast<int>(factors.size());

  ClusterGraph g;
  g.kind = GraphKind::ltrip;
  for (int i = 0; i < n; ++i) {
    g.clusters.push_back({i, factors[i].scope(), factors[i]});
  }

  std::vector<VariableId> vars;
  for (const DiscreteFactor& f : factors) {
    vars.insert(vars.end(), f.scope().begin(), f.scope().end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

  // Selected edges accumulate variables layer by layer.
  std::map<std::pair<int, int>, std::vector<VariableId>> sepset_vars;

  // Reuse of an already-selected edge outweighs any possible scope overlap.
  constexpr long kReuseBonus = 1000;

  for (VariableId v : vars) {
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (std::binary_search(g.clusters[i].variables.begin(), g.clusters[i].variables.end(), v)) {
        members.push_back(i);
      }
    }
    if (members.size() < 2) continue;

    struct Candidate {
      long weight;
      int a, b;
    };
    std::vector<Candidate> cands;
    cands.reserve(members.size() * (members.size() - 1) / 2);
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const int a = members[x], b = members[y];
        long w = static_cast<long>(
            overlap_size(g.clusters[a].variables, g.clusters[b].variables));
        if (sepset_vars.count({a, b})) w += kReuseBonus;
        cands.push_back({w, a, b});
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate& l, const Candidate& r) {
      if (l.weight != r.weight) return l.weight > r.weight;
      if (l.a != r.a) return l.a < r.a;
      return l.b < r.b;
    });

    // Kruskal over the member clusters; every pair overlaps at least on v,
    // so a spanning tree always exists.
    std::map<int, int> index;
    for (std::size_t i = 0; i < members.size(); ++i) index[members[i]] = static_cast<int>(i);
    UnionFind uf(static_cast<int>(members.size()));
    std::size_t picked = 0;
    for (const Candidate& c : cands) {
      if (picked + 1 == members.size()) break;
      if (uf.unite(index[c.a], index[c.b])) {
        sepset_vars[{c.a, c.b}].push_back(v);
        ++picked;
      }
    }
  }

  for (auto& [key, sv] : sepset_vars) {
    std::sort(sv.begin(), sv.end());
    g.sepsets.push_back({key.first, key.second, sv});
  }
  return g;
}

bool verify_rip(const ClusterGraph& graph, VariableId v) {
  std::vector<int> members;
  for (const Cluster& c : graph.clusters) {
    if (std::binary_search(c.variables.begin(), c.variables.end(), v)) {
      members.push_back(c.id);
    }
  }
  if (members.size() <= 1) return true;

  std::map<int, int> index;
  for (std::size_t i = 0; i < members.size(); ++i) index[members[i]] = static_cast<int>(i);

  UnionFind uf(static_cast<int>(members.size()));
  std::size_t used = 0;
  for (const Sepset& s : graph.sepsets) {
    if (!std::binary_search(s.variables.begin(), s.variables.end(), v)) continue;
    if (!index.count(s.a) || !index.count(s.b)) return false;  // label outside endpoints
    if (!uf.unite(index[s.a], index[s.b])) return false;       // cycle in v's layer
    ++used;
  }
  return used + 1 == members.size();  // spanning and connected
}

void dump_graph(const ClusterGraph& graph, std::ostream& os) {
  for (const Cluster& c : graph.clusters) {
    os << "cluster " << c.id;
    for (VariableId v : c.variables) os << ' ' << v;
    os << '\n';
  }
  std::vector<Sepset> sorted = graph.sepsets;
  std::sort(sorted.begin(), sorted.end(), [](const Sepset& l, const Sepset& r) {
    return std::tie(l.a, l.b) < std::tie(r.a, r.b);
  });
  for (const Sepset& s : sorted) {
    os << "sepset " << s.a << ' ' << s.b;
    for (VariableId v : s.variables) os << ' ' << v;
    os << '\n';
  }
}

std::string dump_graph(const ClusterGraph& graph) {
  std::ostringstream os;
  dump_graph(graph, os);
  return os.str();
}

}  // namespace ldpcpgm
