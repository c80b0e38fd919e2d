#include "bnsense/oracle.hpp"

#include <bit>
#include <cmath>

#include "bnsense/error.hpp"

namespace bnsense::oracle {

namespace {

void guard(const Network& net) {
  std::size_t states = 1;
  for (const Variable& v : net.variables()) {
    states *= v.arity();
    if (states > kMaxJointStates) throw AnalysisError("joint state space too large to enumerate");
  }
}

// Calls visit(assignment, weight) for every joint assignment, where weight is
// p(assignment) times the likelihood of every finding.
template <typename Visit>
void enumerate(const Network& net, const Evidence& evidence, Visit&& visit) {
  guard(net);
  const std::size_t n = net.size();
  std::vector<std::size_t> a(n, 0);
  while (true) {
    double w = 1.0;
    for (const auto& [v, vec] : evidence.findings()) w *= vec[a[v]];
    if (w != 0.0) visit(a, w * brute_joint(net, a));
    std::size_t k = n;
    while (k-- > 0) {
      if (++a[k] < net.variable(k).arity()) break;
      a[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
}

}  // namespace

double brute_joint(const Network& net, std::span<const std::size_t> assignment) {
  double p = 1.0;
  for (VarId v = 0; v < net.size(); ++v) {
    const auto& pa = net.parents(v);
    std::size_t row = 0;
    for (VarId u : pa) row = row * net.variable(u).arity() + assignment[u];
    p *= net.cpt(v)[row][assignment[v]];
  }
  return p;
}

QueryMass brute_query(const Network& net, const QueryRef& query) {
  QueryMass out;
  enumerate(net, query.evidence, [&](const std::vector<std::size_t>& a, double w) {
    out.evidence += w;
    if (a[query.variable] == query.state_index) out.joint += w;
  });
  return out;
}

double brute_evidence(const Network& net, const Evidence& evidence) {
  double total = 0.0;
  enumerate(net, evidence, [&](const std::vector<std::size_t>&, double w) { total += w; });
  return total;
}

std::vector<double> brute_marginal(const Network& net, VarId v, const Evidence& evidence) {
  std::vector<double> out(net.variable(v).arity(), 0.0);
  enumerate(net, evidence, [&](const std::vector<std::size_t>& a, double w) { out[a[v]] += w; });
  return out;
}

SensitivityFunction fit_linear_sf(const Network& net, const QueryRef& query,
                                  const ParameterRef& param) {
  const QueryMass at0 = brute_query(apply_parameter(net, param, 0.0), query);
  const QueryMass mid = brute_query(apply_parameter(net, param, 0.5), query);
  const QueryMass at1 = brute_query(apply_parameter(net, param, 1.0), query);

  SensitivityFunction sf;
  sf.param = param;
  sf.query = query;
  sf.numerator = LinearCoeffs{at1.joint - at0.joint, at0.joint};
  sf.denominator = LinearCoeffs{at1.evidence - at0.evidence, at0.evidence};
  if (std::abs(sf.numerator(0.5) - mid.joint) > 1e-10 ||
      std::abs(sf.denominator(0.5) - mid.evidence) > 1e-10) {
    throw AnalysisError("linearity witness failed for " + parameter_label(net, param));
  }
  return sf;
}

MultilinearFunction fit_multilinear(const Network& net, const Evidence& evidence,
                                    const std::vector<ParameterRef>& params) {
  const std::size_t n = params.size();
  if (n > 10) throw AnalysisError("oracle multilinear fit limited to 10 parameters");
  auto evaluate_at = [&](auto value_of) {
    Network moved = net;
    for (std::size_t k = 0; k < n; ++k) moved = apply_parameter(moved, params[k], value_of(k));
    return brute_evidence(moved, evidence);
  };

  const std::size_t corners = std::size_t{1} << n;
  std::vector<double> grid(corners);
  for (std::size_t s = 0; s < corners; ++s) {
    grid[s] = evaluate_at([s](std::size_t k) { return ((s >> k) & 1U) ? 1.0 : 0.0; });
  }
  // Moebius inversion: coeff(Z) = sum_{S subset Z} (-1)^{|Z \ S|} grid(S).
  std::vector<double> coeffs(corners, 0.0);
  for (std::uint32_t z = 0; z < corners; ++z) {
    for (std::uint32_t s = z;; s = (s - 1) & z) {
      const int parity = std::popcount(z & ~s) % 2;
      coeffs[z] += parity ? -grid[s] : grid[s];
      if (s == 0) break;
    }
  }
  MultilinearFunction mf(params, std::move(coeffs));

  const std::vector<double> half(n, 0.5);
  const double direct = evaluate_at([](std::size_t) { return 0.5; });
  if (std::abs(evaluate_multilinear(mf, half) - direct) > 1e-10) {
    throw AnalysisError("multilinear witness failed at the all-1/2 point");
  }
  return mf;
}

}  // namespace bnsense::oracle
