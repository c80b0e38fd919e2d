#include "bnsense/jtree.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include <json.hpp>

#include "bnsense/error.hpp"
#include "bnsense/graph.hpp"

namespace bnsense {

namespace {

std::vector<std::size_t> cards_of(const Network& net, const std::vector<VarId>& vars) {
  std::vector<std::size_t> cards;
  cards.reserve(vars.size());
  for (VarId v : vars) cards.push_back(net.variable(v).arity());
  return cards;
}

// Union-find for Kruskal.
struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

CliqueId JunctionTree::clique_containing(VarId v) const {
  for (const Clique& c : cliques_) {
    if (std::binary_search(c.members.begin(), c.members.end(), v)) return c.id;
  }
  throw Error("variable is in no clique");
}

void JunctionTree::recharge(CliqueId k) {
  Clique& c = cliques_[k];
  c.charge.fill(1.0);
  for (VarId v : c.families) c.charge.multiply_in(cpt_potential(*network_, v));
}

void JunctionTree::reset() {
  findings_.clear();
  query_finding_.reset();
  for (Sepset& s : sepsets_) {
    s.potential.fill(1.0);
    s.message_to_a.fill(1.0);
    s.message_to_b.fill(1.0);
  }
  for (Clique& c : cliques_) c.potential = c.charge;
  sync_ = Sync::none;
}

void JunctionTree::replace_network(std::shared_ptr<const Network> net, VarId v) {
  if (!net || net->size() != network_->size()) {
    throw Error("replacement network has a different structure");
  }
  network_ = std::move(net);
  const CliqueId k = family_clique_.at(v);
  recharge(k);
  refresh(k);
  invalidate(k);
}

JunctionTree build_junction_tree(std::shared_ptr<const Network> net) {
  const Network& network = *net;
  const Triangulation tri = triangulate(moralize(network));

  // Maximal elimination cliques, ordered lexicographically by member list.
  std::vector<std::vector<VarId>> members;
  for (const auto& c : tri.elimination_cliques) {
    bool dominated = false;
    for (const auto& d : tri.elimination_cliques) {
      if (&c != &d && c.size() <= d.size() && std::includes(d.begin(), d.end(), c.begin(), c.end())) {
        // Identical sets: keep only the first occurrence.
        if (c.size() < d.size() || &d < &c) {
          dominated = true;
          break;
        }
      }
    }
    if (!dominated) members.emplace_back(c.begin(), c.end());
  }
  std::sort(members.begin(), members.end());

  JunctionTree tree;
  tree.network_ = std::move(net);
  for (std::size_t k = 0; k < members.size(); ++k) {
    Clique c;
    c.id = k;
    c.members = members[k];
    c.charge = Potential(c.members, cards_of(network, c.members), 1.0);
    tree.cliques_.push_back(std::move(c));
  }

  // Maximum-weight spanning tree over all clique pairs; zero-weight pairs
  // join the components of a disconnected network through empty sepsets.
  struct Candidate {
    std::size_t weight;
    std::size_t mass;
    CliqueId a;
    CliqueId b;
  };
  std::vector<Candidate> candidates;
  for (CliqueId a = 0; a < members.size(); ++a) {
    for (CliqueId b = a + 1; b < members.size(); ++b) {
      std::vector<VarId> common;
      std::set_intersection(members[a].begin(), members[a].end(), members[b].begin(),
                            members[b].end(), std::back_inserter(common));
      std::size_t mass = 1;
      for (VarId v : common) mass *= network.variable(v).arity();
      candidates.push_back({common.size(), mass, a, b});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(y.weight, y.mass, x.a, x.b) < std::tie(x.weight, x.mass, y.a, y.b);
  });
  DisjointSets sets(members.size());
  std::vector<std::pair<CliqueId, CliqueId>> chosen;
  for (const Candidate& c : candidates) {
    if (sets.unite(c.a, c.b)) chosen.emplace_back(c.a, c.b);
  }
  std::sort(chosen.begin(), chosen.end());

  tree.links_.assign(members.size(), {});
  for (auto [a, b] : chosen) {
    Sepset s;
    s.a = a;
    s.b = b;
    std::set_intersection(members[a].begin(), members[a].end(), members[b].begin(),
                          members[b].end(), std::back_inserter(s.members));
    s.potential = Potential(s.members, cards_of(network, s.members), 1.0);
    s.message_to_a = s.potential;
    s.message_to_b = s.potential;
    const std::size_t index = tree.sepsets_.size();
    tree.sepsets_.push_back(std::move(s));
    tree.links_[a].push_back({b, index});
    tree.links_[b].push_back({a, index});
  }
  for (auto& l : tree.links_) {
    std::sort(l.begin(), l.end(), [](const JunctionTree::Link& x, const JunctionTree::Link& y) { return x.clique < y.clique; });
  }

  tree.family_clique_.assign(network.size(), 0);
  for (VarId v = 0; v < network.size(); ++v) {
    std::vector<VarId> family = network.parents(v);
    family.push_back(v);
    std::sort(family.begin(), family.end());
    bool placed = false;
    for (Clique& c : tree.cliques_) {
      if (std::includes(c.members.begin(), c.members.end(), family.begin(), family.end())) {
        c.families.push_back(v);
        tree.family_clique_[v] = c.id;
        placed = true;
        break;
      }
    }
    if (!placed) throw Error("family of '" + network.variable(v).name + "' fits no clique");
  }
  for (CliqueId k = 0; k < tree.cliques_.size(); ++k) tree.recharge(k);
  tree.reset();
  return tree;
}

JunctionTree build_junction_tree(const Network& net) {
  return build_junction_tree(std::make_shared<const Network>(net));
}

std::string jtree_to_json(const JunctionTree& tree) {
  const Network& net = tree.network();
  auto names = [&](const std::vector<VarId>& vars) {
    std::vector<std::string> out;
    for (VarId v : vars) out.push_back(net.variable(v).name);
    return out;
  };
  nlohmann::ordered_json doc;
  doc["cliques"] = nlohmann::ordered_json::array();
  for (const Clique& c : tree.cliques()) {
    doc["cliques"].push_back(
        {{"id", c.id}, {"members", names(c.members)}, {"families", names(c.families)}});
  }
  doc["sepsets"] = nlohmann::ordered_json::array();
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Sepset& s : tree.sepsets()) {
    doc["sepsets"].push_back({{"cliques", {s.a, s.b}}, {"members", names(s.members)}});
    doc["edges"].push_back({s.a, s.b});
  }
  return doc.dump();
}

}  // namespace bnsense
