#include <algorithm>
#include <cmath>
#include <string>

#include "bnsense/error.hpp"
#include "bnsense/jtree.hpp"

namespace bnsense {

Potential& JunctionTree::message_into(std::size_t sepset, CliqueId receiver) {
  Sepset& s = sepsets_[sepset];
  return receiver == s.a ? s.message_to_a : s.message_to_b;
}

const Potential& JunctionTree::message_into(std::size_t sepset, CliqueId receiver) const {
  const Sepset& s = sepsets_[sepset];
  return receiver == s.a ? s.message_to_a : s.message_to_b;
}

Potential JunctionTree::local_product(CliqueId k, std::optional<std::size_t> skip) const {
  Potential p = cliques_[k].charge;
  for (const auto& [v, f] : findings_) {
    if (f.clique == k) p.multiply_in(v, f.likelihood);
  }
  if (query_finding_ && query_finding_->second.clique == k) {
    p.multiply_in(query_finding_->first, query_finding_->second.likelihood);
  }
  for (const Link& l : links_[k]) {
    if (skip && *skip == l.sepset) continue;
    p.multiply_in(message_into(l.sepset, k));
  }
  return p;
}

void JunctionTree::refresh(CliqueId k) { cliques_[k].potential = local_product(k, std::nullopt); }

void JunctionTree::send(CliqueId from, CliqueId to, std::size_t sepset) {
  Sepset& s = sepsets_[sepset];
  message_into(sepset, to) = local_product(from, sepset).marginalize(s.members);
  s.potential = s.message_to_a;
  s.potential.multiply_in(s.message_to_b);
  ++stats_.messages_passed;
}

void JunctionTree::invalidate(CliqueId k) {
  switch (sync_) {
    case Sync::all:
      // Every message toward k is computed without k's local factors.
      sync_ = Sync::toward_root;
      sync_root_ = k;
      break;
    case Sync::toward_root:
      if (sync_root_ != k) sync_ = Sync::none;
      break;
    case Sync::none:
      break;
  }
}

void JunctionTree::enter_finding(VarId v, std::vector<double> likelihood) {
  const Variable& var = network_->variable(v);
  if (likelihood.size() != var.arity()) {
    throw UsageError("finding on '" + var.name + "' has the wrong length");
  }
  if (std::none_of(likelihood.begin(), likelihood.end(), [](double x) { return x > 0.0; })) {
    throw ImpossibleEvidence("finding on '" + var.name + "' has no positive entry");
  }
  const CliqueId k = family_clique_.at(v);
  findings_[v] = HostedFinding{k, std::move(likelihood)};
  refresh(k);
  invalidate(k);
}

void JunctionTree::enter_evidence(const Evidence& evidence) {
  for (const auto& [v, vec] : evidence.findings()) enter_finding(v, vec);
}

void JunctionTree::set_query_finding(CliqueId k, VarId v, std::vector<double> likelihood) {
  if (!cliques_.at(k).charge.contains(v)) throw Error("query finding on a non-member variable");
  if (query_finding_) {
    const CliqueId old = query_finding_->second.clique;
    query_finding_.reset();
    refresh(old);
    invalidate(old);
  }
  query_finding_.emplace(v, HostedFinding{k, std::move(likelihood)});
  refresh(k);
  invalidate(k);
}

void JunctionTree::clear_query_finding() {
  if (!query_finding_) return;
  const CliqueId k = query_finding_->second.clique;
  query_finding_.reset();
  refresh(k);
  invalidate(k);
}

void JunctionTree::collect(CliqueId root) {
  if (root >= cliques_.size()) throw Error("collect: root clique out of range");
  // Iterative DFS from root; reversed preorder sends every message after all
  // of the sender's own inbound messages.
  std::vector<std::pair<CliqueId, std::size_t>> preorder;  // (clique, sepset to parent)
  std::vector<CliqueId> parent(cliques_.size(), cliques_.size());
  std::vector<CliqueId> stack{root};
  parent[root] = root;
  std::vector<std::size_t> up_sepset(cliques_.size(), 0);
  while (!stack.empty()) {
    const CliqueId k = stack.back();
    stack.pop_back();
    preorder.emplace_back(k, up_sepset[k]);
    for (auto it = links_[k].rbegin(); it != links_[k].rend(); ++it) {
      if (parent[it->clique] != cliques_.size()) continue;
      parent[it->clique] = k;
      up_sepset[it->clique] = it->sepset;
      stack.push_back(it->clique);
    }
  }
  // Messages away from root are stale from here on.
  for (auto [k, sep] : preorder) {
    if (k == root) continue;
    message_into(sep, k).fill(1.0);
  }
  for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
    const auto [k, sep] = *it;
    refresh(k);
    if (k != root) send(k, parent[k], sep);
  }
  refresh(root);
  sync_ = Sync::toward_root;
  sync_root_ = root;
  ++stats_.inward_propagations;
}

void JunctionTree::distribute(CliqueId root) {
  if (root >= cliques_.size()) throw Error("distribute: root clique out of range");
  if (sync_ == Sync::none || (sync_ == Sync::toward_root && sync_root_ != root)) {
    throw Error("distribute: inward messages toward the root are not current");
  }
  std::vector<bool> seen(cliques_.size(), false);
  std::vector<CliqueId> queue{root};
  seen[root] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const CliqueId k = queue[head];
    for (const Link& l : links_[k]) {
      if (seen[l.clique]) continue;
      seen[l.clique] = true;
      send(k, l.clique, l.sepset);
      queue.push_back(l.clique);
    }
  }
  for (CliqueId k : queue) refresh(k);
  sync_ = Sync::all;
  ++stats_.outward_propagations;
}

std::vector<double> JunctionTree::marginal(VarId v) const {
  const Clique& c = cliques_[clique_containing(v)];
  const VarId keep[] = {v};
  const Potential m = c.potential.marginalize(keep);
  return {m.values().begin(), m.values().end()};
}

void JunctionTree::retract_finding(VarId v) {
  auto it = findings_.find(v);
  if (it == findings_.end()) {
    throw AnalysisError("no finding registered on '" + network_->variable(v).name + "'");
  }
  if (sync_ != Sync::all) throw Error("retract_finding: tree is not fully propagated");
  const CliqueId k = it->second.clique;
  findings_.erase(it);
  refresh(k);
  invalidate(k);
  distribute(k);
  if (!(cliques_[k].potential.sum() > 0.0)) {
    throw ImpossibleEvidence("remaining evidence has probability zero");
  }
}

double propagate_full(JunctionTree& tree, const Evidence& evidence, CliqueId root) {
  tree.reset();
  tree.enter_evidence(evidence);
  tree.collect(root);
  tree.distribute(root);
  const double pe = tree.clique(root).potential.sum();
  if (!(pe > 0.0)) throw ImpossibleEvidence("evidence has probability zero");
  return pe;
}

}  // namespace bnsense
