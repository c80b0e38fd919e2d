#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bnsense/error.hpp"
#include "bnsense/evidence.hpp"
#include "bnsense/jtree.hpp"
#include "bnsense/network.hpp"
#include "bnsense/oracle.hpp"
#include "bnsense/random_network.hpp"

namespace testing {

using namespace bnsense;

inline std::string fixture(const std::string& name) {
  return std::string(BNSENSE_FIXTURE_DIR) + "/" + name;
}

inline Network r1() { return load_network_file(fixture("r1.json")); }
inline Network r2() { return load_network_file(fixture("r2.json")); }

struct Case {
  std::uint64_t seed = 0;
  Network net;
  QueryRef query;
};

// Random network, evidence with p(e) > 0 and a random query, all from one seed.
inline Case make_case(std::uint64_t seed, const RandomNetworkOptions& options = {}) {
  std::mt19937_64 rng(seed);
  Case c;
  c.seed = seed;
  c.net = random_network(rng, options);
  Evidence ev;
  for (int attempt = 0; attempt < 100; ++attempt) {
    ev = random_evidence(rng, c.net, 3);
    JunctionTree tree = build_junction_tree(c.net);
    try {
      propagate_full(tree, ev, 0);
      break;
    } catch (const ImpossibleEvidence&) {
      ev = Evidence{};
    }
  }
  std::uniform_int_distribution<VarId> pick_var(0, c.net.size() - 1);
  c.query.variable = pick_var(rng);
  std::uniform_int_distribution<std::size_t> pick_state(0, c.net.variable(c.query.variable).arity() - 1);
  c.query.state_index = pick_state(rng);
  c.query.evidence = ev;
  return c;
}

inline std::vector<Case> corpus(std::size_t count, std::uint64_t first_seed = 1) {
  std::vector<Case> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(make_case(first_seed + k));
  return out;
}

// Entry of a potential at a full joint assignment.
inline double at(const Potential& p, const std::vector<std::size_t>& assignment) {
  std::size_t index = 0;
  for (std::size_t i = 0; i < p.vars().size(); ++i) {
    index = index * p.cards()[i] + assignment[p.vars()[i]];
  }
  return p[index];
}

inline bool running_intersection(const JunctionTree& tree) {
  const std::size_t n = tree.network().size();
  for (VarId v = 0; v < n; ++v) {
    std::vector<char> holds(tree.cliques().size(), 0);
    std::size_t count = 0;
    for (const Clique& c : tree.cliques()) {
      if (std::binary_search(c.members.begin(), c.members.end(), v)) {
        holds[c.id] = 1;
        ++count;
      }
    }
    if (count == 0) return false;
    CliqueId start = 0;
    while (!holds[start]) ++start;
    std::vector<char> seen(holds.size(), 0);
    std::vector<CliqueId> stack{start};
    seen[start] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      const CliqueId k = stack.back();
      stack.pop_back();
      ++reached;
      for (const auto& link : tree.links(k)) {
        if (holds[link.clique] && !seen[link.clique]) {
          seen[link.clique] = 1;
          stack.push_back(link.clique);
        }
      }
    }
    if (reached != count) return false;
  }
  return true;
}

// Largest disagreement between a sepset and the projection of either neighbor.
inline double sepset_inconsistency(const JunctionTree& tree) {
  double worst = 0.0;
  for (const Sepset& s : tree.sepsets()) {
    for (CliqueId k : {s.a, s.b}) {
      const Potential m = tree.clique(k).potential.marginalize(s.potential.vars());
      for (std::size_t i = 0; i < m.size(); ++i) {
        worst = std::max(worst, std::abs(m[i] - s.potential[i]));
      }
    }
  }
  return worst;
}

// Components are joined through empty sepsets, so every clique sums to p(e).
inline double clique_sum_spread(const JunctionTree& tree, double pe) {
  double worst = 0.0;
  for (const Clique& c : tree.cliques()) worst = std::max(worst, std::abs(c.potential.sum() - pe));
  return worst;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline double coeff_diff(const SensitivityFunction& a, const SensitivityFunction& b) {
  return std::max({std::abs(a.alpha() - b.alpha()), std::abs(a.beta() - b.beta()),
                   std::abs(a.gamma() - b.gamma()), std::abs(a.delta() - b.delta())});
}

}  // namespace testing
