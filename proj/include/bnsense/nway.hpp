#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnsense/evidence.hpp"
#include "bnsense/jtree.hpp"
#include "bnsense/network.hpp"

namespace bnsense {

inline constexpr std::size_t kMaxNwayOrder = 12;

// A subset Z of an ordered parameter list, bit k standing for parameter k.
struct SubsetIndex {
  std::uint32_t bits = 0;

  bool contains(std::size_t k) const { return (bits >> k) & 1U; }
  std::size_t size() const;
  bool is_subset_of(SubsetIndex other) const { return (bits & ~other.bits) == 0; }
  friend bool operator==(SubsetIndex a, SubsetIndex b) { return a.bits == b.bits; }
};

// p(e)(x_1..x_n) = sum over Z of coeff(Z) * prod_{z in Z} x_z. The empty
// subset holds the constant term.
class MultilinearFunction {
 public:
  MultilinearFunction() = default;
  MultilinearFunction(std::vector<ParameterRef> params, std::vector<double> coeffs);

  const std::vector<ParameterRef>& params() const { return params_; }
  std::size_t order() const { return params_.size(); }
  double coeff(SubsetIndex z) const { return coeffs_.at(z.bits); }
  double& coeff(SubsetIndex z) { return coeffs_.at(z.bits); }
  const std::vector<double>& coeffs() const { return coeffs_; }

  // Fixes parameter k at `value`, giving a function of the others.
  MultilinearFunction restrict_to(std::size_t k, double value) const;

 private:
  std::vector<ParameterRef> params_;
  std::vector<double> coeffs_;  // indexed by SubsetIndex::bits
};

// Throws AnalysisError on a length mismatch.
double evaluate_multilinear(const MultilinearFunction& mf, std::span<const double> values);

// Pairwise: distinct CPT rows, and neither variable is a parent of the other's.
bool check_independent(const Network& net, const std::vector<ParameterRef>& params);

// Lowest-id clique containing every parameter's family, or none.
std::optional<CliqueId> common_family_clique(const JunctionTree& tree,
                                             const std::vector<ParameterRef>& params);

// All 2^n coefficients from p(C, e) of one clique C holding every family,
// after a single full propagation.
MultilinearFunction same_clique_nway(JunctionTree& tree, const std::vector<ParameterRef>& params,
                                     const Evidence& evidence);

// An m-way function over a subset of the n parameters, valid with every
// parameter outside the subset held at `setting`. A subset of size zero
// carries p(e) at that setting.
struct LowerOrderResult {
  std::vector<std::size_t> subset;  // indices into the n-way parameter list
  std::vector<double> setting;      // value of each of the n parameters
  std::vector<double> coeffs;       // 2^|subset| coefficients over the subset
};

struct NwayResult {
  MultilinearFunction function;
  std::size_t planned_propagations = 0;     // a-priori budget
  std::size_t additional_propagations = 0;  // full propagations actually run
  std::size_t equations = 0;
  PropagationStats stats;
};

// Solves for the 2^n coefficients from the supplied lower-order results,
// adding full propagations at fresh parameter settings until the system
// reaches full rank.
NwayResult general_nway(const Network& net, const std::vector<ParameterRef>& params,
                        const Evidence& evidence, const std::vector<LowerOrderResult>& lower_order);

// Lower-order inputs obtainable from one full propagation at the operating
// point: p(e) and the one-way p(e)(x) line of each parameter.
std::vector<LowerOrderResult> oneway_lower_order(JunctionTree& tree,
                                                 const std::vector<ParameterRef>& params,
                                                 const Evidence& evidence);

// Equations from the initial propagation, 2^m C(n,m) + 1, divided into 2^n;
// what remains is the number of further propagations planned.
std::size_t extra_propagation_budget(std::size_t n, std::size_t m);

// Subset keys like "{}", "{0}", "{0,1}".
std::string subset_key(SubsetIndex z);

}  // namespace bnsense
