#pragma once

#include <set>
#include <utility>
#include <vector>

#include "bnsense/network.hpp"

namespace bnsense {

using Edge = std::pair<VarId, VarId>;  // stored with first < second

class UndirectedGraph {
 public:
  UndirectedGraph() = default;
  explicit UndirectedGraph(std::size_t vertices) : adj_(vertices) {}

  std::size_t size() const { return adj_.size(); }
  void add_edge(VarId a, VarId b);
  bool has_edge(VarId a, VarId b) const { return adj_.at(a).count(b) != 0; }
  const std::set<VarId>& neighbors(VarId v) const { return adj_.at(v); }
  std::set<Edge> edges() const;

 private:
  std::vector<std::set<VarId>> adj_;
};

UndirectedGraph moralize(const Network& net);

struct Triangulation {
  std::vector<VarId> order;
  std::set<Edge> fill_edges;
  // Elimination clique of each step: the vertex plus its neighbors at that
  // moment. Maximal ones are the cliques of the chordal graph.
  std::vector<std::set<VarId>> elimination_cliques;
};

// Greedy min-fill elimination, ties broken by lowest vertex id.
Triangulation triangulate(const UndirectedGraph& graph);

}  // namespace bnsense
