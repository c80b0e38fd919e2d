#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bnsense/evidence.hpp"
#include "bnsense/network.hpp"
#include "bnsense/potential.hpp"

namespace bnsense {

using CliqueId = std::size_t;

struct PropagationStats {
  std::size_t inward_propagations = 0;
  std::size_t outward_propagations = 0;
  std::size_t messages_passed = 0;
};

struct Clique {
  CliqueId id = 0;
  std::vector<VarId> members;   // sorted
  std::vector<VarId> families;  // variables whose family {B} u pa(B) is assigned here
  Potential charge;             // product of the assigned CPTs, never touched by evidence
  Potential potential;          // current belief: charge x findings x incoming messages
};

// Separator between cliques a < b. The two directional messages are kept
// apart so a finding can be changed or withdrawn at one clique and the
// tree rebalanced by a single outward pass from there.
struct Sepset {
  CliqueId a = 0;
  CliqueId b = 0;
  std::vector<VarId> members;
  Potential potential;  // message_to_a x message_to_b
  Potential message_to_a;
  Potential message_to_b;
};

struct HostedFinding {
  CliqueId clique = 0;
  std::vector<double> likelihood;
};

// A junction tree (a forest joined through empty sepsets when the network
// is disconnected). Owns mutable potentials: one propagation at a time per
// instance; copy the tree to work in parallel.
class JunctionTree {
 public:
  struct Link {
    CliqueId clique;
    std::size_t sepset;
  };

  JunctionTree() = default;

  const Network& network() const { return *network_; }
  const std::shared_ptr<const Network>& network_ptr() const { return network_; }
  const std::vector<Clique>& cliques() const { return cliques_; }
  const Clique& clique(CliqueId k) const { return cliques_.at(k); }
  const std::vector<Sepset>& sepsets() const { return sepsets_; }
  const std::vector<Link>& links(CliqueId k) const { return links_.at(k); }

  // Lowest-id clique containing {v} u pa(v); CPT of v lives there.
  CliqueId family_clique(VarId v) const { return family_clique_.at(v); }
  // Lowest-id clique containing v.
  CliqueId clique_containing(VarId v) const;

  const PropagationStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

  // Drops every finding and message; beliefs return to the charges.
  void reset();

  // --- evidence and message passing (propagation.cpp) ---

  // Registers the finding at the family clique of v, replacing any earlier
  // finding on v. Throws ImpossibleEvidence on an all-zero vector.
  void enter_finding(VarId v, std::vector<double> likelihood);
  void enter_evidence(const Evidence& evidence);
  const std::map<VarId, HostedFinding>& findings() const { return findings_; }

  // Removes v's finding and restores consistency with one outward pass
  // from the hosting clique. Requires a fully propagated tree.
  void retract_finding(VarId v);

  // An extra finding attached to a chosen clique, kept outside the registry
  // (the A = a / A != a indicator of the sensitivity methods).
  void set_query_finding(CliqueId k, VarId v, std::vector<double> likelihood);
  void clear_query_finding();

  // Inward pass: messages from the leaves toward root.
  void collect(CliqueId root);
  // Outward pass: messages from root toward the leaves. Needs the inward
  // messages toward root to be current.
  void distribute(CliqueId root);

  bool consistent() const { return sync_ == Sync::all; }

  // p(v, e): marginal of the lowest-id clique containing v.
  std::vector<double> marginal(VarId v) const;

  // Swaps in a network that differs from the current one only in v's CPT
  // and recharges v's family clique.
  void replace_network(std::shared_ptr<const Network> net, VarId v);

 private:
  friend JunctionTree build_junction_tree(std::shared_ptr<const Network> net);

  enum class Sync { none, toward_root, all };

  Potential& message_into(std::size_t sepset, CliqueId receiver);
  const Potential& message_into(std::size_t sepset, CliqueId receiver) const;
  // charge x hosted findings x incoming messages, optionally skipping one sepset.
  Potential local_product(CliqueId k, std::optional<std::size_t> skip) const;
  void send(CliqueId from, CliqueId to, std::size_t sepset);
  void refresh(CliqueId k);
  void recharge(CliqueId k);
  // Bookkeeping after the local factors of clique k changed.
  void invalidate(CliqueId k);

  std::shared_ptr<const Network> network_;
  std::vector<Clique> cliques_;
  std::vector<Sepset> sepsets_;
  std::vector<std::vector<Link>> links_;
  std::vector<CliqueId> family_clique_;
  std::map<VarId, HostedFinding> findings_;
  std::optional<std::pair<VarId, HostedFinding>> query_finding_;
  PropagationStats stats_;
  Sync sync_ = Sync::none;
  CliqueId sync_root_ = 0;
};

JunctionTree build_junction_tree(std::shared_ptr<const Network> net);
JunctionTree build_junction_tree(const Network& net);

// Enters e into a reset tree, runs collect + distribute toward root and
// returns p(e). Throws ImpossibleEvidence when p(e) = 0.
double propagate_full(JunctionTree& tree, const Evidence& evidence, CliqueId root);

// Cliques, sepsets and edges by variable name, for inspection and golden files.
std::string jtree_to_json(const JunctionTree& tree);

}  // namespace bnsense
