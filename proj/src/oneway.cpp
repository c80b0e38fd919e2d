#include "bnsense/oneway.hpp"

#include <cmath>
#include <map>

#include "bnsense/error.hpp"
#include "bnsense/relevance.hpp"

namespace bnsense {

namespace {

// p(family, .) from the family clique, laid out like the CPT: row r of the
// parent configurations, then the child's state.
Potential family_table(const JunctionTree& tree, VarId b) {
  const Network& net = tree.network();
  std::vector<VarId> family = net.parents(b);
  family.push_back(b);
  return tree.clique(tree.family_clique(b)).potential.marginalize(family);
}

// Direct coefficient formulas: slope and intercept of the mass of the family
// table as a function of the parameter.
LinearCoeffs line_from_family(const Network& net, const Potential& table, const ParameterRef& p) {
  const std::size_t m = net.variable(p.variable).arity();
  const std::size_t r = row_of(net, p);
  const double x = p.initial_value;
  double row_mass = 0.0;
  double others = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    row_mass += table[r * m + j];
    if (j != p.state_index) others += table[r * m + j];
  }
  const double rest = table.sum() - row_mass;
  const double own = table[r * m + p.state_index];
  return LinearCoeffs{own / x - others / (1.0 - x), others / (1.0 - x) + rest};
}

// Total mass and the mass after reweighting row r by p'(B|pi)/p(B|pi).
std::pair<double, double> two_point_masses(const Network& net, const Potential& table,
                                           const ParameterRef& p, double x2) {
  const VarId b = p.variable;
  const std::size_t m = net.variable(b).arity();
  const std::size_t r = row_of(net, p);
  const auto& row = net.cpt(b)[r];
  const auto moved = covary_row(row, p.state_index, x2);

  Potential before({b}, {m}), after({b}, {m});
  for (std::size_t j = 0; j < m; ++j) {
    before[j] = row[j];
    after[j] = moved[j];
  }
  const Potential ratio = after.divide(before);

  const double y1 = table.sum();
  double y2 = y1;
  for (std::size_t j = 0; j < m; ++j) y2 += table[r * m + j] * (ratio[j] - 1.0);
  return {y1, y2};
}

LinearCoeffs line_through(double x1, double y1, double x2, double y2) {
  return LinearCoeffs{(y1 - y2) / (x1 - x2), (x1 * y2 - x2 * y1) / (x1 - x2)};
}

std::vector<double> indicator(std::size_t arity, std::size_t state, bool negate) {
  std::vector<double> v(arity, negate ? 1.0 : 0.0);
  v.at(state) = negate ? 0.0 : 1.0;
  return v;
}

// Splits the candidate parameters into analyzable and skipped ones.
std::vector<ParameterRef> screen(const Network& net, const QueryRef& query, ParameterScope scope,
                                 std::vector<SkippedParameter>& skipped) {
  std::vector<ParameterRef> candidates =
      scope == ParameterScope::relevant ? relevant_parameters(net, query) : enumerate_parameters(net);
  std::vector<ParameterRef> out;
  for (ParameterRef& p : candidates) {
    if (p.initial_value >= 1.0) {
      skipped.push_back({p, "degenerate parameter: initial value 1"});
    } else if (p.initial_value <= 0.0) {
      skipped.push_back({p, "initial value 0: clique potentials carry no information on it"});
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

void check_query(const Network& net, const QueryRef& query) {
  if (query.variable >= net.size() || query.state_index >= net.variable(query.variable).arity()) {
    throw AnalysisError("query out of range");
  }
}

}  // namespace

double second_point(double x1) { return x1 < 0.5 ? (x1 + 1.0) / 2.0 : x1 / 2.0; }

OneWayResult one_output_all_params_m1(JunctionTree& tree, const QueryRef& query,
                                      ParameterScope scope) {
  const Network& net = tree.network();
  check_query(net, query);
  OneWayResult result;
  const auto params = screen(net, query, scope, result.skipped);

  const CliqueId h = tree.clique_containing(query.variable);
  propagate_full(tree, query.evidence, h);

  std::map<VarId, Potential> evidence_tables;
  for (const ParameterRef& p : params) {
    if (!evidence_tables.count(p.variable)) {
      evidence_tables.emplace(p.variable, family_table(tree, p.variable));
    }
  }

  const std::size_t arity = net.variable(query.variable).arity();
  tree.set_query_finding(h, query.variable, indicator(arity, query.state_index, false));
  tree.distribute(h);

  std::map<VarId, Potential> query_tables;
  for (const ParameterRef& p : params) {
    auto it = query_tables.find(p.variable);
    if (it == query_tables.end()) {
      it = query_tables.emplace(p.variable, family_table(tree, p.variable)).first;
    }
    SensitivityFunction sf;
    sf.param = p;
    sf.query = query;
    sf.numerator = line_from_family(net, it->second, p);
    sf.denominator = line_from_family(net, evidence_tables.at(p.variable), p);
    result.functions.push_back(std::move(sf));
  }
  tree.clear_query_finding();
  return result;
}

OneWayResult one_output_all_params_m2(JunctionTree& tree, const QueryRef& query,
                                      ParameterScope scope) {
  const Network& net = tree.network();
  check_query(net, query);
  OneWayResult result;
  const auto params = screen(net, query, scope, result.skipped);

  const CliqueId h = tree.clique_containing(query.variable);
  tree.reset();
  tree.enter_evidence(query.evidence);
  tree.collect(h);
  if (!(tree.clique(h).potential.sum() > 0.0)) {
    throw ImpossibleEvidence("evidence has probability zero");
  }

  const std::size_t arity = net.variable(query.variable).arity();
  auto pass = [&](bool negate) {
    tree.set_query_finding(h, query.variable, indicator(arity, query.state_index, negate));
    tree.distribute(h);
    std::vector<LinearCoeffs> lines;
    std::map<VarId, Potential> tables;
    for (const ParameterRef& p : params) {
      auto it = tables.find(p.variable);
      if (it == tables.end()) it = tables.emplace(p.variable, family_table(tree, p.variable)).first;
      const double x1 = p.initial_value;
      const double x2 = second_point(x1);
      const auto [y1, y2] = two_point_masses(net, it->second, p, x2);
      lines.push_back(line_through(x1, y1, x2, y2));
    }
    return lines;
  };

  const auto with_a = pass(false);
  // Swapping the indicator withdraws A = a while e stays entered.
  const auto without_a = pass(true);
  tree.clear_query_finding();

  for (std::size_t k = 0; k < params.size(); ++k) {
    SensitivityFunction sf;
    sf.param = params[k];
    sf.query = query;
    sf.numerator = with_a[k];
    sf.denominator = LinearCoeffs{with_a[k].slope + without_a[k].slope,
                                  with_a[k].intercept + without_a[k].intercept};
    result.functions.push_back(std::move(sf));
  }
  return result;
}

std::vector<SensitivityFunction> all_outputs_one_param(JunctionTree& tree,
                                                       const ParameterRef& param,
                                                       const Evidence& evidence,
                                                       const std::vector<VarId>& targets) {
  const auto original = tree.network_ptr();
  const Network& net = *original;
  if (param.initial_value >= 1.0) {
    throw AnalysisError("degenerate parameter " + parameter_label(net, param) +
                        ": initial value 1");
  }
  const double x1 = param.initial_value;
  const double x2 = second_point(x1);
  const CliqueId k = tree.family_clique(param.variable);

  propagate_full(tree, evidence, k);
  std::vector<std::vector<double>> first;
  for (VarId a : targets) first.push_back(tree.marginal(a));

  tree.replace_network(std::make_shared<const Network>(apply_parameter(net, param, x2)),
                       param.variable);
  tree.distribute(k);
  std::vector<std::vector<double>> second;
  for (VarId a : targets) second.push_back(tree.marginal(a));
  tree.replace_network(original, param.variable);

  std::vector<SensitivityFunction> out;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::vector<LinearCoeffs> per_state;
    LinearCoeffs total;
    for (std::size_t s = 0; s < first[t].size(); ++s) {
      per_state.push_back(line_through(x1, first[t][s], x2, second[t][s]));
      total.slope += per_state.back().slope;
      total.intercept += per_state.back().intercept;
    }
    for (std::size_t s = 0; s < per_state.size(); ++s) {
      SensitivityFunction sf;
      sf.param = param;
      sf.query = QueryRef{targets[t], s, evidence};
      sf.numerator = per_state[s];
      sf.denominator = total;
      out.push_back(std::move(sf));
    }
  }
  return out;
}

double evaluate(const SensitivityFunction& sf, double x) {
  const double den = sf.denominator(x);
  if (!(den > 0.0)) throw AnalysisError("sensitivity function undefined: gamma x + delta <= 0");
  return sf.numerator(x) / den;
}

double derivative(const SensitivityFunction& sf, double x) {
  const double den = sf.denominator(x);
  if (!(den > 0.0)) throw AnalysisError("sensitivity function undefined: gamma x + delta <= 0");
  return (sf.alpha() * sf.delta() - sf.beta() * sf.gamma()) / (den * den);
}

std::vector<LinearCoeffs> evidence_lines(const JunctionTree& tree,
                                         const std::vector<ParameterRef>& params) {
  const Network& net = tree.network();
  std::vector<LinearCoeffs> out;
  for (const ParameterRef& p : params) {
    if (p.initial_value >= 1.0 || p.initial_value <= 0.0) {
      throw AnalysisError("parameter " + parameter_label(net, p) +
                          " needs an initial value strictly inside (0, 1)");
    }
    out.push_back(line_from_family(net, family_table(tree, p.variable), p));
  }
  return out;
}

}  // namespace bnsense
