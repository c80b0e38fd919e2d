#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bnsense/network.hpp"

namespace bnsense {

// Dense non-negative table over the joint states of an ordered variable list.
// The last variable varies fastest, matching the CPT row convention.
class Potential {
 public:
  Potential() = default;
  Potential(std::vector<VarId> vars, std::vector<std::size_t> cards, double fill = 1.0);

  const std::vector<VarId>& vars() const { return vars_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  // Position of v in vars(), or vars().size() when absent.
  std::size_t position(VarId v) const;
  bool contains(VarId v) const { return position(v) < vars_.size(); }

  double sum() const;
  void fill(double x);

  // For every entry of this table, the index of the matching entry in a
  // table over `sub` (which must be a subset of vars()).
  std::vector<std::size_t> projection(std::span<const VarId> sub,
                                      std::span<const std::size_t> sub_cards) const;

  // Marginal onto `keep`, ordered as given.
  Potential marginalize(std::span<const VarId> keep) const;

  // this *= other, where other.vars() is a subset of vars().
  void multiply_in(const Potential& other);
  // this *= vec over the states of one member variable.
  void multiply_in(VarId v, std::span<const double> vec);

  // Entrywise quotient of tables over the same variables with 0/0 := 0.
  // A positive numerator over a zero denominator throws InconsistentPotential.
  Potential divide(const Potential& denominator) const;

 private:
  std::vector<VarId> vars_;
  std::vector<std::size_t> cards_;
  std::vector<double> values_;
};

// The CPT of v as a potential over (parents..., v).
Potential cpt_potential(const Network& net, VarId v);

}  // namespace bnsense
