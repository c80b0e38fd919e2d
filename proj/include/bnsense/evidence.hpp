#pragma once

#include <map>
#include <string_view>
#include <vector>

#include "bnsense/network.hpp"

namespace bnsense {

// Findings as likelihood vectors, one per observed variable. Hard and
// negative findings are stored as their indicator vectors. Adding a second
// finding on the same variable multiplies the vectors together.
class Evidence {
 public:
  Evidence() = default;

  void add_hard(const Network& net, VarId v, std::size_t state);
  void add_negative(const Network& net, VarId v, std::size_t state);
  // Throws ImpossibleEvidence if the combined vector has no positive entry.
  void add_likelihood(const Network& net, VarId v, std::vector<double> likelihood);

  bool empty() const { return findings_.empty(); }
  std::size_t size() const { return findings_.size(); }
  bool has(VarId v) const { return findings_.count(v) != 0; }
  const std::vector<double>& likelihood(VarId v) const { return findings_.at(v); }
  const std::map<VarId, std::vector<double>>& findings() const { return findings_; }

  // Exactly one positive entry: the finding fixes the variable's state.
  bool is_hard(VarId v) const;

  Evidence without(VarId v) const;

 private:
  std::map<VarId, std::vector<double>> findings_;
};

// The output y = p(a | e).
struct QueryRef {
  VarId variable = 0;
  std::size_t state_index = 0;
  Evidence evidence;
};

// "B=yes,C!=no": '=' enters a hard finding, '!=' a negative finding.
Evidence parse_evidence(const Network& net, std::string_view text);

}  // namespace bnsense
