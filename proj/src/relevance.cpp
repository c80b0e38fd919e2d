#include "bnsense/relevance.hpp"

#include <utility>

namespace bnsense {

bool parameters_may_influence(const Network& net, VarId variable, const QueryRef& query) {
  if (variable == query.variable) return true;
  const std::size_t n = net.size();

  std::vector<bool> observed(n, false);
  std::vector<bool> has_finding(n, false);
  for (const auto& [v, vec] : query.evidence.findings()) {
    has_finding[v] = true;
    // The query variable is never conditioned on outright.
    if (v != query.variable && query.evidence.is_hard(v)) observed[v] = true;
  }

  // Variables with a finding at or below them (a soft finding counts as an
  // observed virtual child).
  std::vector<bool> activates(n, false);
  std::vector<VarId> stack;
  for (VarId v = 0; v < n; ++v) {
    if (has_finding[v]) {
      activates[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const VarId v = stack.back();
    stack.pop_back();
    for (VarId p : net.parents(v)) {
      if (!activates[p]) {
        activates[p] = true;
        stack.push_back(p);
      }
    }
  }

  // Reachability over (node, arrived-from-child?) pairs. The dummy parent's
  // only trail starts by entering `variable` from above.
  std::vector<bool> seen_up(n, false), seen_down(n, false);
  std::vector<std::pair<VarId, bool>> frontier{{variable, false}};
  while (!frontier.empty()) {
    const auto [v, from_child] = frontier.back();
    frontier.pop_back();
    auto& seen = from_child ? seen_up : seen_down;
    if (seen[v]) continue;
    seen[v] = true;
    if (!observed[v] && v == query.variable) return true;

    if (from_child) {
      if (observed[v]) continue;
      for (VarId p : net.parents(v)) frontier.emplace_back(p, true);
      for (VarId c : net.children(v)) frontier.emplace_back(c, false);
    } else {
      if (!observed[v]) {
        for (VarId c : net.children(v)) frontier.emplace_back(c, false);
      }
      if (activates[v]) {
        for (VarId p : net.parents(v)) frontier.emplace_back(p, true);
      }
    }
  }
  return false;
}

std::vector<ParameterRef> relevant_parameters(const Network& net, const QueryRef& query) {
  std::vector<bool> influential(net.size());
  for (VarId v = 0; v < net.size(); ++v) influential[v] = parameters_may_influence(net, v, query);
  std::vector<ParameterRef> out;
  for (ParameterRef& p : enumerate_parameters(net)) {
    if (influential[p.variable]) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace bnsense
