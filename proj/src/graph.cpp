#include "bnsense/graph.hpp"

#include <limits>

#include "bnsense/error.hpp"

namespace bnsense {

void UndirectedGraph::add_edge(VarId a, VarId b) {
  if (a == b) throw Error("graph: self-loop");
  adj_.at(a).insert(b);
  adj_.at(b).insert(a);
}

std::set<Edge> UndirectedGraph::edges() const {
  std::set<Edge> out;
  for (VarId a = 0; a < adj_.size(); ++a) {
    for (VarId b : adj_[a]) {
      if (a < b) out.emplace(a, b);
    }
  }
  return out;
}

UndirectedGraph moralize(const Network& net) {
  UndirectedGraph g(net.size());
  for (VarId v = 0; v < net.size(); ++v) {
    const auto& pa = net.parents(v);
    for (std::size_t i = 0; i < pa.size(); ++i) {
      g.add_edge(pa[i], v);
      for (std::size_t j = i + 1; j < pa.size(); ++j) g.add_edge(pa[i], pa[j]);
    }
  }
  return g;
}

Triangulation triangulate(const UndirectedGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<std::set<VarId>> adj(n);
  for (VarId v = 0; v < n; ++v) adj[v] = graph.neighbors(v);
  std::vector<bool> eliminated(n, false);

  auto fill_count = [&](VarId v) {
    std::size_t missing = 0;
    for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
      for (auto b = std::next(a); b != adj[v].end(); ++b) {
        if (adj[*a].count(*b) == 0) ++missing;
      }
    }
    return missing;
  };

  Triangulation t;
  for (std::size_t step = 0; step < n; ++step) {
    VarId best = n;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (VarId v = 0; v < n; ++v) {
      if (eliminated[v]) continue;
      const std::size_t f = fill_count(v);
      if (f < best_fill) {
        best = v;
        best_fill = f;
      }
    }

    std::set<VarId> clique = adj[best];
    clique.insert(best);
    for (auto a = adj[best].begin(); a != adj[best].end(); ++a) {
      for (auto b = std::next(a); b != adj[best].end(); ++b) {
        if (adj[*a].insert(*b).second) {
          adj[*b].insert(*a);
          t.fill_edges.emplace(*a, *b);
        }
      }
    }
    for (VarId u : adj[best]) adj[u].erase(best);
    adj[best].clear();
    eliminated[best] = true;
    t.order.push_back(best);
    t.elimination_cliques.push_back(std::move(clique));
  }
  return t;
}

}  // namespace bnsense
