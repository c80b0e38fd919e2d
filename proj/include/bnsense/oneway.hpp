#pragma once

#include <string>
#include <vector>

#include "bnsense/evidence.hpp"
#include "bnsense/jtree.hpp"
#include "bnsense/network.hpp"

namespace bnsense {

struct LinearCoeffs {
  double slope = 0.0;
  double intercept = 0.0;

  double operator()(double x) const { return slope * x + intercept; }
};

// y(x) = (alpha x + beta) / (gamma x + delta): numerator p(a, e)(x),
// denominator p(e)(x).
struct SensitivityFunction {
  ParameterRef param;
  QueryRef query;
  LinearCoeffs numerator;    // alpha, beta
  LinearCoeffs denominator;  // gamma, delta

  double alpha() const { return numerator.slope; }
  double beta() const { return numerator.intercept; }
  double gamma() const { return denominator.slope; }
  double delta() const { return denominator.intercept; }
};

struct SkippedParameter {
  ParameterRef param;
  std::string reason;
};

struct OneWayResult {
  std::vector<SensitivityFunction> functions;  // enumerate_parameters order
  std::vector<SkippedParameter> skipped;
};

enum class ParameterScope { relevant, all };

// Coefficients read from p(K, a, e) and p(K, e) of each family clique:
// one full propagation, then one extra outward pass from the query clique
// with A = a added.
OneWayResult one_output_all_params_m1(JunctionTree& tree, const QueryRef& query,
                                      ParameterScope scope = ParameterScope::relevant);

// Two-point variant: inward pass to the query clique, outward with A = a,
// then the indicator is swapped for A != a and a second outward pass runs.
// Each clique potential is reweighted by p'(B|pi)/p(B|pi) to get the second
// point, and the denominator is the sum of the two numerators.
OneWayResult one_output_all_params_m2(JunctionTree& tree, const QueryRef& query,
                                      ParameterScope scope = ParameterScope::relevant);

// Functions for every state of every target variable in a single parameter:
// marginals at x1, then the CPT is changed to x2 and one outward pass from
// the parameter's family clique gives the second point.
std::vector<SensitivityFunction> all_outputs_one_param(JunctionTree& tree,
                                                       const ParameterRef& param,
                                                       const Evidence& evidence,
                                                       const std::vector<VarId>& targets);

// Second evaluation point used by the two-point methods; |x1 - x2| >= 0.25.
double second_point(double x1);

// Throws AnalysisError when gamma x + delta <= 0.
double evaluate(const SensitivityFunction& sf, double x);
double derivative(const SensitivityFunction& sf, double x);

// One-way p(e)(x) lines for the given parameters from p(K, e) of a
// propagated tree (the denominators of method 1). Parameters must be
// non-degenerate with a positive initial value.
std::vector<LinearCoeffs> evidence_lines(const JunctionTree& tree,
                                         const std::vector<ParameterRef>& params);

}  // namespace bnsense
