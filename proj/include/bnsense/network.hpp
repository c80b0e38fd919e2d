#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bnsense {

using VarId = std::size_t;

struct Variable {
  VarId id = 0;
  std::string name;
  std::vector<std::string> states;

  std::size_t arity() const { return states.size(); }
};

// A discrete Bayesian network. Rows of a CPT are indexed by parent
// configuration with parents in listed order and the LAST parent varying
// fastest; each row is a distribution over the child's states.
class Network {
 public:
  Network() = default;

  // Validates structure and renormalizes rows. Throws NetworkError.
  Network(std::vector<Variable> variables, std::vector<std::vector<VarId>> parents,
          std::vector<std::vector<std::vector<double>>> cpts);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId v) const { return variables_.at(v); }
  const std::vector<VarId>& parents(VarId v) const { return parents_.at(v); }
  const std::vector<VarId>& children(VarId v) const { return children_.at(v); }
  const std::vector<std::vector<double>>& cpt(VarId v) const { return cpts_.at(v); }
  const std::vector<VarId>& topological_order() const { return topo_; }

  // Throws NetworkError when the name is unknown.
  VarId id_of(std::string_view name) const;
  std::size_t state_index(VarId v, std::string_view state) const;

  // Number of parent configurations (rows) of v.
  std::size_t row_count(VarId v) const { return cpts_.at(v).size(); }

  // Row index of a parent configuration given as one state index per parent.
  std::size_t row_index(VarId v, std::span<const std::size_t> parent_config) const;
  std::vector<std::size_t> parent_config(VarId v, std::size_t row) const;

  // Replaces one row; the row must already be normalized. Used by
  // apply_parameter on a copy.
  void set_row(VarId v, std::size_t row, std::vector<double> values);

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<VarId>> parents_;
  std::vector<std::vector<VarId>> children_;
  std::vector<std::vector<std::vector<double>>> cpts_;
  std::vector<VarId> topo_;
};

// One CPT entry x = p(b_i | pi).
struct ParameterRef {
  VarId variable = 0;
  std::size_t state_index = 0;
  std::vector<std::size_t> parent_config;
  double initial_value = 0.0;

  friend bool operator==(const ParameterRef& a, const ParameterRef& b) {
    return a.variable == b.variable && a.state_index == b.state_index &&
           a.parent_config == b.parent_config;
  }
};

// Row index of the parameter inside its variable's CPT.
std::size_t row_of(const Network& net, const ParameterRef& p);

// Builds a ParameterRef from indices, filling in the initial value.
ParameterRef make_parameter(const Network& net, VarId variable, std::size_t state,
                            std::vector<std::size_t> parent_config);

Network load_network(std::string_view document);
Network load_network_file(const std::string& path);
std::string to_json(const Network& net);

// Proportional co-variation: sets row[i] to x and rescales the remaining
// entries by (1-x)/(1-row[i]). Throws AnalysisError when row[i] == 1.
std::vector<double> covary_row(std::span<const double> row, std::size_t i, double x);

Network apply_parameter(const Network& net, const ParameterRef& param, double x);

// Variable id, then parent configuration index, then state index.
std::vector<ParameterRef> enumerate_parameters(const Network& net);

// Human-readable forms used in reports: "p(B=yes|A=yes)" and "A=yes;C=no".
std::string parameter_label(const Network& net, const ParameterRef& p);
std::string parent_config_label(const Network& net, const ParameterRef& p);

// Parses "B|A=yes:yes" (child B, parent A at yes, state yes); several parents
// are joined with '&', a root variable is written "A:yes". Throws UsageError.
ParameterRef parse_parameter(const Network& net, std::string_view text);

}  // namespace bnsense
