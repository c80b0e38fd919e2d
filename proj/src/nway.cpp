#include "bnsense/nway.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>

#include "bnsense/error.hpp"
#include "bnsense/oneway.hpp"

namespace bnsense {

namespace {

constexpr double kPivotThreshold = 1e-10;
constexpr unsigned kPrimes[kMaxNwayOrder] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double sign_of(std::uint32_t bits) { return (std::popcount(bits) % 2 == 0) ? 1.0 : -1.0; }

void check_parameter_set(const Network& net, const std::vector<ParameterRef>& params) {
  if (params.empty() || params.size() > kMaxNwayOrder) {
    throw AnalysisError("n-way analysis needs between 1 and " + std::to_string(kMaxNwayOrder) +
                        " parameters");
  }
  if (!check_independent(net, params)) throw AnalysisError("parameters are not independent");
  for (const ParameterRef& p : params) {
    if (p.initial_value >= 1.0) {
      throw AnalysisError("degenerate parameter " + parameter_label(net, p) + ": initial value 1");
    }
    if (p.initial_value <= 0.0) {
      throw AnalysisError("parameter " + parameter_label(net, p) + " has initial value 0");
    }
  }
}

// Van der Corput radical inverse of k in the given base, in (0, 1) for k >= 1.
double radical_inverse(std::size_t k, unsigned base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (k > 0) {
    result += static_cast<double>(k % base) * scale;
    k /= base;
    scale /= base;
  }
  return result;
}

class EquationSystem {
 public:
  explicit EquationSystem(std::size_t unknowns) : unknowns_(unknowns) {}

  void add(std::vector<double> row, double rhs) {
    rows_.push_back(std::move(row));
    rhs_.push_back(rhs);
  }

  std::size_t equations() const { return rows_.size(); }

  void add_result(const LowerOrderResult& r) {
    const std::size_t m = r.subset.size();
    if (r.coeffs.size() != (std::size_t{1} << m)) {
      throw AnalysisError("lower-order result has the wrong number of coefficients");
    }
    std::uint32_t s_bits = 0;
    for (std::size_t k : r.subset) s_bits |= 1U << k;
    for (std::uint32_t local = 0; local < r.coeffs.size(); ++local) {
      std::uint32_t t_bits = 0;
      for (std::size_t j = 0; j < m; ++j) {
        if ((local >> j) & 1U) t_bits |= 1U << r.subset[j];
      }
      std::vector<double> row(unknowns_, 0.0);
      for (std::uint32_t z = 0; z < unknowns_; ++z) {
        if ((z & s_bits) != t_bits) continue;
        double product = 1.0;
        for (std::size_t k = 0; k < r.setting.size(); ++k) {
          if (((z >> k) & 1U) && !((s_bits >> k) & 1U)) product *= r.setting[k];
        }
        row[z] = product;
      }
      add(std::move(row), r.coeffs[local]);
    }
  }

  // Gaussian elimination with partial pivoting over the stacked equations.
  // Returns the rank; fills `solution` when the rank is full.
  std::size_t solve(std::vector<double>* solution) const {
    std::vector<std::vector<double>> a = rows_;
    std::vector<double> b = rhs_;
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < unknowns_ && rank < a.size(); ++col) {
      std::size_t best = rank;
      for (std::size_t r = rank + 1; r < a.size(); ++r) {
        if (std::abs(a[r][col]) > std::abs(a[best][col])) best = r;
      }
      if (std::abs(a[best][col]) < kPivotThreshold) continue;
      std::swap(a[rank], a[best]);
      std::swap(b[rank], b[best]);
      for (std::size_t r = rank + 1; r < a.size(); ++r) {
        const double f = a[r][col] / a[rank][col];
        if (f == 0.0) continue;
        for (std::size_t c = col; c < unknowns_; ++c) a[r][c] -= f * a[rank][c];
        b[r] -= f * b[rank];
      }
      pivot_col.push_back(col);
      ++rank;
    }
    if (rank == unknowns_ && solution) {
      solution->assign(unknowns_, 0.0);
      for (std::size_t i = rank; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < unknowns_; ++c) acc -= a[i][c] * (*solution)[c];
        (*solution)[i] = acc / a[i][i];
      }
    }
    return rank;
  }

 private:
  std::size_t unknowns_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
};

}  // namespace

std::size_t SubsetIndex::size() const { return static_cast<std::size_t>(std::popcount(bits)); }

MultilinearFunction::MultilinearFunction(std::vector<ParameterRef> params, std::vector<double> coeffs)
    : params_(std::move(params)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != (std::size_t{1} << params_.size())) {
    throw AnalysisError("multilinear function needs 2^n coefficients");
  }
}

MultilinearFunction MultilinearFunction::restrict_to(std::size_t k, double value) const {
  if (k >= params_.size()) throw AnalysisError("restricted parameter out of range");
  std::vector<ParameterRef> rest = params_;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<double> out(std::size_t{1} << rest.size(), 0.0);
  const std::uint32_t low = (1U << k) - 1;
  for (std::uint32_t z = 0; z < coeffs_.size(); ++z) {
    const std::uint32_t compact = (z & low) | ((z >> (k + 1)) << k);
    out[compact] += coeffs_[z] * (((z >> k) & 1U) ? value : 1.0);
  }
  return MultilinearFunction(std::move(rest), std::move(out));
}

double evaluate_multilinear(const MultilinearFunction& mf, std::span<const double> values) {
  if (values.size() != mf.order()) {
    throw AnalysisError("expected " + std::to_string(mf.order()) + " parameter values, got " +
                        std::to_string(values.size()));
  }
  double total = 0.0;
  for (std::uint32_t z = 0; z < mf.coeffs().size(); ++z) {
    double term = mf.coeffs()[z];
    for (std::size_t k = 0; k < values.size(); ++k) {
      if ((z >> k) & 1U) term *= values[k];
    }
    total += term;
  }
  return total;
}

bool check_independent(const Network& net, const std::vector<ParameterRef>& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    for (std::size_t j = i + 1; j < params.size(); ++j) {
      const ParameterRef& x = params[i];
      const ParameterRef& y = params[j];
      if (x.variable == y.variable && x.parent_config == y.parent_config) return false;
      const auto& px = net.parents(x.variable);
      const auto& py = net.parents(y.variable);
      if (std::find(py.begin(), py.end(), x.variable) != py.end()) return false;
      if (std::find(px.begin(), px.end(), y.variable) != px.end()) return false;
    }
  }
  return true;
}

std::optional<CliqueId> common_family_clique(const JunctionTree& tree,
                                             const std::vector<ParameterRef>& params) {
  const Network& net = tree.network();
  for (const Clique& c : tree.cliques()) {
    bool all = true;
    for (const ParameterRef& p : params) {
      std::vector<VarId> family = net.parents(p.variable);
      family.push_back(p.variable);
      std::sort(family.begin(), family.end());
      if (!std::includes(c.members.begin(), c.members.end(), family.begin(), family.end())) {
        all = false;
        break;
      }
    }
    if (all) return c.id;
  }
  return std::nullopt;
}

MultilinearFunction same_clique_nway(JunctionTree& tree, const std::vector<ParameterRef>& params,
                                     const Evidence& evidence) {
  const Network& net = tree.network();
  check_parameter_set(net, params);
  const auto home = common_family_clique(tree, params);
  if (!home) throw AnalysisError("parameter families do not share a clique");
  const std::size_t n = params.size();

  propagate_full(tree, evidence, *home);
  const Potential& phi = tree.clique(*home).potential;
  const auto& members = phi.vars();

  // Positions of each parameter's child and parents among the clique members.
  struct Locator {
    std::size_t child;
    std::vector<std::size_t> parents;
  };
  std::vector<Locator> loc;
  for (const ParameterRef& p : params) {
    Locator l{phi.position(p.variable), {}};
    for (VarId u : net.parents(p.variable)) l.parents.push_back(phi.position(u));
    loc.push_back(std::move(l));
  }

  // mass[active][agree]: clique mass over configurations in which exactly the
  // parameters in `active` have their parent configuration pi, and those in
  // `agree` also have the child at b, scaled by prod p_y prod (1 - p_w).
  std::map<std::uint32_t, std::map<std::uint32_t, double>> mass;
  std::vector<std::size_t> digit(members.size(), 0);
  for (std::size_t idx = 0; idx < phi.size(); ++idx) {
    std::uint32_t active = 0, agree = 0;
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const ParameterRef& p = params[i];
      bool on = true;
      for (std::size_t k = 0; k < loc[i].parents.size() && on; ++k) {
        on = digit[loc[i].parents[k]] == p.parent_config[k];
      }
      if (!on) continue;
      active |= 1U << i;
      if (digit[loc[i].child] == p.state_index) {
        agree |= 1U << i;
        scale *= p.initial_value;
      } else {
        scale *= 1.0 - p.initial_value;
      }
    }
    if (phi[idx] != 0.0) mass[active][agree] += phi[idx] / scale;
    for (std::size_t k = members.size(); k-- > 0;) {
      if (++digit[k] < phi.cards()[k]) break;
      digit[k] = 0;
    }
  }

  std::vector<double> coeffs(std::size_t{1} << n, 0.0);
  for (const auto& [active, by_agree] : mass) {
    // f(Y) = (-1)^{|A \ Y|} mass(A, Y); gamma(Z) = (-1)^{|A \ Z|} sum_{Y subset Z} f(Y).
    std::map<std::uint32_t, double> f;
    for (const auto& [agree, m] : by_agree) f[agree] = sign_of(active & ~agree) * m;
    for (std::uint32_t z = active;; z = (z - 1) & active) {
      double sum = 0.0;
      for (std::uint32_t y = z;; y = (y - 1) & z) {
        if (auto it = f.find(y); it != f.end()) sum += it->second;
        if (y == 0) break;
      }
      coeffs[z] += sign_of(active & ~z) * sum;
      if (z == 0) break;
    }
  }
  return MultilinearFunction(params, std::move(coeffs));
}

std::vector<LowerOrderResult> oneway_lower_order(JunctionTree& tree,
                                                 const std::vector<ParameterRef>& params,
                                                 const Evidence& evidence) {
  std::vector<double> setting;
  for (const ParameterRef& p : params) setting.push_back(p.initial_value);
  const double pe = propagate_full(tree, evidence, 0);
  const auto lines = evidence_lines(tree, params);

  std::vector<LowerOrderResult> out;
  out.push_back(LowerOrderResult{{}, setting, {pe}});
  for (std::size_t i = 0; i < params.size(); ++i) {
    out.push_back(LowerOrderResult{{i}, setting, {lines[i].intercept, lines[i].slope}});
  }
  return out;
}

NwayResult general_nway(const Network& net, const std::vector<ParameterRef>& params,
                        const Evidence& evidence, const std::vector<LowerOrderResult>& lower_order) {
  check_parameter_set(net, params);
  const std::size_t n = params.size();
  const std::size_t unknowns = std::size_t{1} << n;

  EquationSystem system(unknowns);
  std::size_t m = 0;
  for (const LowerOrderResult& r : lower_order) {
    if (r.setting.size() != n) throw AnalysisError("lower-order setting has the wrong length");
    for (std::size_t k : r.subset) {
      if (k >= n) throw AnalysisError("lower-order subset index out of range");
    }
    m = std::max(m, r.subset.size());
    system.add_result(r);
  }

  NwayResult result;
  result.planned_propagations = (m < n) ? extra_propagation_budget(n, m) : 0;

  auto base = std::make_shared<const Network>(net);
  JunctionTree tree = build_junction_tree(base);
  auto propagate_at = [&](std::size_t k) {
    std::vector<double> setting(n);
    Network moved = net;
    std::vector<ParameterRef> at;
    for (std::size_t i = 0; i < n; ++i) {
      setting[i] = radical_inverse(k, kPrimes[i]);
      moved = apply_parameter(moved, params[i], setting[i]);
      at.push_back(make_parameter(moved, params[i].variable, params[i].state_index,
                                  params[i].parent_config));
    }
    auto shared = std::make_shared<const Network>(std::move(moved));
    for (const ParameterRef& p : params) tree.replace_network(shared, p.variable);
    const double pe = propagate_full(tree, evidence, 0);
    const auto lines = evidence_lines(tree, at);
    system.add_result(LowerOrderResult{{}, setting, {pe}});
    for (std::size_t i = 0; i < n; ++i) {
      system.add_result(LowerOrderResult{{i}, setting, {lines[i].intercept, lines[i].slope}});
    }
    ++result.additional_propagations;
  };

  for (std::size_t k = 0; k < result.planned_propagations; ++k) {
    propagate_at(result.additional_propagations + 1);
  }
  std::vector<double> solution;
  while (system.solve(&solution) < unknowns) {
    if (result.additional_propagations >= unknowns) {
      throw AnalysisError("coefficient system did not reach full rank after " +
                          std::to_string(unknowns) + " extra propagations");
    }
    propagate_at(result.additional_propagations + 1);
  }
  result.function = MultilinearFunction(params, std::move(solution));
  result.equations = system.equations();
  result.stats = tree.stats();
  return result;
}

std::size_t extra_propagation_budget(std::size_t n, std::size_t m) {
  if (m >= n) return 0;
  std::size_t binom = 1;
  for (std::size_t i = 0; i < m; ++i) binom = binom * (n - i) / (i + 1);
  const std::size_t per_propagation = (std::size_t{1} << m) * binom + 1;
  const std::size_t needed = std::size_t{1} << n;
  return (needed + per_propagation - 1) / per_propagation - 1;
}

std::string subset_key(SubsetIndex z) {
  std::string out = "{";
  bool first = true;
  for (std::size_t k = 0; k < 32; ++k) {
    if (!z.contains(k)) continue;
    if (!first) out += ',';
    out += std::to_string(k);
    first = false;
  }
  return out + "}";
}

}  // namespace bnsense
