#include "bnsense/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bnsense/error.hpp"

namespace bnsense {

namespace {

constexpr double kRowSumTolerance = 1e-6;

std::string row_location(const Variable& v, std::size_t row) {
  return "variable '" + v.name + "', row " + std::to_string(row);
}

}  // namespace

Network::Network(std::vector<Variable> variables, std::vector<std::vector<VarId>> parents,
                 std::vector<std::vector<std::vector<double>>> cpts)
    : variables_(std::move(variables)), parents_(std::move(parents)), cpts_(std::move(cpts)) {
  const std::size_t n = variables_.size();
  if (parents_.size() != n || cpts_.size() != n) {
    throw NetworkError("network needs one parent list and one CPT per variable");
  }

  std::set<std::string> names;
  for (std::size_t v = 0; v < n; ++v) {
    Variable& var = variables_[v];
    var.id = v;
    if (var.name.empty()) throw NetworkError("variable " + std::to_string(v) + " has no name");
    if (!names.insert(var.name).second) {
      throw NetworkError("duplicate variable name '" + var.name + "'");
    }
    if (var.states.empty()) throw NetworkError("variable '" + var.name + "' has no states");
    std::set<std::string> labels(var.states.begin(), var.states.end());
    if (labels.size() != var.states.size()) {
      throw NetworkError("variable '" + var.name + "' has duplicate state labels");
    }
  }

  children_.assign(n, {});
  for (std::size_t v = 0; v < n; ++v) {
    std::set<VarId> seen;
    for (VarId p : parents_[v]) {
      if (p >= n) throw NetworkError("variable '" + variables_[v].name + "' has unknown parent");
      if (p == v) throw NetworkError("variable '" + variables_[v].name + "' is its own parent");
      if (!seen.insert(p).second) {
        throw NetworkError("variable '" + variables_[v].name + "' lists parent '" +
                           variables_[p].name + "' twice");
      }
      children_[p].push_back(v);
    }
  }

  // Kahn's algorithm; ties broken by lowest id so the order is deterministic.
  std::vector<std::size_t> indegree(n);
  for (std::size_t v = 0; v < n; ++v) indegree[v] = parents_[v].size();
  std::set<VarId> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(v);
  }
  while (!ready.empty()) {
    VarId v = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(v);
    for (VarId c : children_[v]) {
      if (--indegree[c] == 0) ready.insert(c);
    }
  }
  if (topo_.size() != n) {
    std::string cyclic;
    for (std::size_t v = 0; v < n; ++v) {
      if (indegree[v] > 0) cyclic += (cyclic.empty() ? "" : ", ") + variables_[v].name;
    }
    throw NetworkError("parent structure is cyclic (involving " + cyclic + ")");
  }

  for (std::size_t v = 0; v < n; ++v) {
    const Variable& var = variables_[v];
    std::size_t expected_rows = 1;
    for (VarId p : parents_[v]) expected_rows *= variables_[p].arity();
    if (cpts_[v].size() != expected_rows) {
      throw NetworkError("variable '" + var.name + "' has " + std::to_string(cpts_[v].size()) +
                         " CPT rows, expected " + std::to_string(expected_rows));
    }
    for (std::size_t r = 0; r < expected_rows; ++r) {
      auto& row = cpts_[v][r];
      if (row.size() != var.arity()) {
        throw NetworkError(row_location(var, r) + " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(var.arity()));
      }
      double sum = 0.0;
      for (double x : row) {
        if (!std::isfinite(x) || x < 0.0) {
          throw NetworkError(row_location(var, r) + " has a negative or non-finite entry");
        }
        sum += x;
      }
      if (std::abs(sum - 1.0) > kRowSumTolerance) {
        std::ostringstream msg;
        msg << row_location(var, r) << " sums to " << sum << ", not 1";
        throw NetworkError(msg.str());
      }
      for (double& x : row) x /= sum;
    }
  }
}

VarId Network::id_of(std::string_view name) const {
  for (const Variable& v : variables_) {
    if (v.name == name) return v.id;
  }
  throw NetworkError("unknown variable '" + std::string(name) + "'");
}

std::size_t Network::state_index(VarId v, std::string_view state) const {
  const auto& states = variable(v).states;
  auto it = std::find(states.begin(), states.end(), state);
  if (it == states.end()) {
    throw NetworkError("variable '" + variable(v).name + "' has no state '" + std::string(state) +
                       "'");
  }
  return static_cast<std::size_t>(it - states.begin());
}

std::size_t Network::row_index(VarId v, std::span<const std::size_t> parent_config) const {
  const auto& pa = parents(v);
  if (parent_config.size() != pa.size()) {
    throw AnalysisError("parent configuration of '" + variable(v).name + "' has wrong length");
  }
  std::size_t row = 0;
  for (std::size_t k = 0; k < pa.size(); ++k) {
    const std::size_t card = variable(pa[k]).arity();
    if (parent_config[k] >= card) {
      throw AnalysisError("parent state index out of range for '" + variable(v).name + "'");
    }
    row = row * card + parent_config[k];
  }
  return row;
}

std::vector<std::size_t> Network::parent_config(VarId v, std::size_t row) const {
  const auto& pa = parents(v);
  std::vector<std::size_t> config(pa.size());
  for (std::size_t k = pa.size(); k-- > 0;) {
    const std::size_t card = variable(pa[k]).arity();
    config[k] = row % card;
    row /= card;
  }
  return config;
}

void Network::set_row(VarId v, std::size_t row, std::vector<double> values) {
  auto& target = cpts_.at(v).at(row);
  if (values.size() != target.size()) throw AnalysisError("replacement row has wrong arity");
  target = std::move(values);
}

std::size_t row_of(const Network& net, const ParameterRef& p) {
  return net.row_index(p.variable, p.parent_config);
}

ParameterRef make_parameter(const Network& net, VarId variable, std::size_t state,
                            std::vector<std::size_t> parent_config) {
  if (variable >= net.size()) throw AnalysisError("parameter variable out of range");
  if (state >= net.variable(variable).arity()) throw AnalysisError("parameter state out of range");
  ParameterRef p{variable, state, std::move(parent_config), 0.0};
  p.initial_value = net.cpt(variable)[row_of(net, p)][state];
  return p;
}

Network load_network(std::string_view document) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw NetworkError(std::string("network document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("variables") || !doc.contains("cpts") ||
      !doc["variables"].is_array() || !doc["cpts"].is_array()) {
    throw NetworkError("network document needs \"variables\" and \"cpts\" arrays");
  }

  std::vector<Variable> variables;
  std::map<std::string, VarId> index;
  for (const json& jv : doc["variables"]) {
    if (!jv.is_object() || !jv.contains("name") || !jv["name"].is_string() ||
        !jv.contains("states") || !jv["states"].is_array()) {
      throw NetworkError("variable " + std::to_string(variables.size()) +
                         " needs a string \"name\" and a \"states\" array");
    }
    Variable var;
    var.id = variables.size();
    var.name = jv["name"].get<std::string>();
    for (const json& s : jv["states"]) {
      if (!s.is_string()) throw NetworkError("variable '" + var.name + "' has a non-string state");
      var.states.push_back(s.get<std::string>());
    }
    if (!index.emplace(var.name, var.id).second) {
      throw NetworkError("duplicate variable name '" + var.name + "'");
    }
    variables.push_back(std::move(var));
  }

  const std::size_t n = variables.size();
  std::vector<std::vector<VarId>> parents(n);
  std::vector<std::vector<std::vector<double>>> cpts(n);
  std::vector<bool> has_cpt(n, false);
  for (const json& jc : doc["cpts"]) {
    if (!jc.is_object() || !jc.contains("variable") || !jc["variable"].is_string() ||
        !jc.contains("parents") || !jc["parents"].is_array() || !jc.contains("rows") ||
        !jc["rows"].is_array()) {
      throw NetworkError("every CPT needs \"variable\", \"parents\" and \"rows\"");
    }
    const std::string name = jc["variable"].get<std::string>();
    auto it = index.find(name);
    if (it == index.end()) throw NetworkError("CPT for unknown variable '" + name + "'");
    const VarId v = it->second;
    if (has_cpt[v]) throw NetworkError("variable '" + name + "' has more than one CPT");
    has_cpt[v] = true;
    for (const json& jp : jc["parents"]) {
      if (!jp.is_string()) throw NetworkError("variable '" + name + "' has a non-string parent");
      auto pit = index.find(jp.get<std::string>());
      if (pit == index.end()) {
        throw NetworkError("variable '" + name + "' has unknown parent '" +
                           jp.get<std::string>() + "'");
      }
      parents[v].push_back(pit->second);
    }
    std::size_t r = 0;
    for (const json& jr : jc["rows"]) {
      if (!jr.is_array()) throw NetworkError(row_location(variables[v], r) + " is not an array");
      std::vector<double> row;
      for (const json& x : jr) {
        if (!x.is_number()) {
          throw NetworkError(row_location(variables[v], r) + " has a non-numeric entry");
        }
        row.push_back(x.get<double>());
      }
      cpts[v].push_back(std::move(row));
      ++r;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!has_cpt[v]) throw NetworkError("variable '" + variables[v].name + "' has no CPT");
  }
  return Network(std::move(variables), std::move(parents), std::move(cpts));
}

Network load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NetworkError("cannot open network file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_network(buf.str());
}

std::string to_json(const Network& net) {
  nlohmann::ordered_json doc;
  doc["variables"] = nlohmann::ordered_json::array();
  doc["cpts"] = nlohmann::ordered_json::array();
  for (const Variable& v : net.variables()) {
    doc["variables"].push_back({{"name", v.name}, {"states", v.states}});
  }
  for (const Variable& v : net.variables()) {
    std::vector<std::string> parent_names;
    for (VarId p : net.parents(v.id)) parent_names.push_back(net.variable(p).name);
    doc["cpts"].push_back({{"variable", v.name}, {"parents", parent_names}, {"rows", net.cpt(v.id)}});
  }
  return doc.dump();
}

std::vector<double> covary_row(std::span<const double> row, std::size_t i, double x) {
  if (i >= row.size()) throw AnalysisError("state index out of range");
  if (!(x >= 0.0 && x <= 1.0)) throw AnalysisError("parameter value must lie in [0, 1]");
  const double old = row[i];
  if (old >= 1.0) {
    throw AnalysisError("degenerate parameter: p(b_i|pi) = 1 cannot be co-varied");
  }
  std::vector<double> out(row.begin(), row.end());
  if (x == old) return out;
  const double scale = (1.0 - x) / (1.0 - old);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (j == i) ? x : row[j] * scale;
  return out;
}

Network apply_parameter(const Network& net, const ParameterRef& param, double x) {
  const std::size_t row = row_of(net, param);
  Network out = net;
  out.set_row(param.variable, row, covary_row(net.cpt(param.variable)[row], param.state_index, x));
  return out;
}

std::vector<ParameterRef> enumerate_parameters(const Network& net) {
  std::vector<ParameterRef> params;
  for (const Variable& v : net.variables()) {
    const auto& cpt = net.cpt(v.id);
    for (std::size_t r = 0; r < cpt.size(); ++r) {
      const auto config = net.parent_config(v.id, r);
      for (std::size_t s = 0; s < v.arity(); ++s) {
        params.push_back(ParameterRef{v.id, s, config, cpt[r][s]});
      }
    }
  }
  return params;
}

std::string parent_config_label(const Network& net, const ParameterRef& p) {
  std::string out;
  const auto& pa = net.parents(p.variable);
  for (std::size_t k = 0; k < pa.size(); ++k) {
    if (k > 0) out += ';';
    out += net.variable(pa[k]).name + "=" + net.variable(pa[k]).states[p.parent_config[k]];
  }
  return out;
}

std::string parameter_label(const Network& net, const ParameterRef& p) {
  const Variable& v = net.variable(p.variable);
  std::string out = "p(" + v.name + "=" + v.states[p.state_index];
  if (!p.parent_config.empty()) out += "|" + parent_config_label(net, p);
  return out + ")";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

ParameterRef parse_parameter(const Network& net, std::string_view text) {
  text = trim(text);
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw UsageError("parameter '" + std::string(text) + "' lacks ':<state>'");
  }
  std::string_view head = trim(text.substr(0, colon));
  const std::string_view state = trim(text.substr(colon + 1));
  std::string_view given;
  if (auto bar = head.find('|'); bar != std::string_view::npos) {
    given = head.substr(bar + 1);
    head = trim(head.substr(0, bar));
  }
  try {
    const VarId v = net.id_of(head);
    const auto& pa = net.parents(v);
    std::vector<std::size_t> config(pa.size());
    std::vector<bool> set(pa.size(), false);
    while (!given.empty()) {
      const auto amp = given.find('&');
      const std::string_view item = trim(given.substr(0, amp));
      given = (amp == std::string_view::npos) ? std::string_view{} : given.substr(amp + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw UsageError("parent assignment '" + std::string(item) + "' lacks '='");
      }
      const VarId parent = net.id_of(trim(item.substr(0, eq)));
      auto it = std::find(pa.begin(), pa.end(), parent);
      if (it == pa.end()) {
        throw UsageError("'" + net.variable(parent).name + "' is not a parent of '" +
                         net.variable(v).name + "'");
      }
      const auto k = static_cast<std::size_t>(it - pa.begin());
      config[k] = net.state_index(parent, trim(item.substr(eq + 1)));
      set[k] = true;
    }
    if (std::find(set.begin(), set.end(), false) != set.end()) {
      throw UsageError("parameter '" + std::string(text) + "' must fix every parent of '" +
                       net.variable(v).name + "'");
    }
    return make_parameter(net, v, net.state_index(v, state), std::move(config));
  } catch (const NetworkError& e) {
    throw UsageError(e.what());
  }
}

}  // namespace bnsense
