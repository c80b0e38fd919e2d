#include "bnsense/potential.hpp"

#include <algorithm>
#include <numeric>

#include "bnsense/error.hpp"

namespace bnsense {

Potential::Potential(std::vector<VarId> vars, std::vector<std::size_t> cards, double fill)
    : vars_(std::move(vars)), cards_(std::move(cards)) {
  if (vars_.size() != cards_.size()) throw Error("potential: variable/cardinality mismatch");
  std::size_t n = 1;
  for (std::size_t c : cards_) n *= c;
  values_.assign(n, fill);
}

std::size_t Potential::position(VarId v) const {
  return static_cast<std::size_t>(std::find(vars_.begin(), vars_.end(), v) - vars_.begin());
}

double Potential::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

void Potential::fill(double x) { std::fill(values_.begin(), values_.end(), x); }

std::vector<std::size_t> Potential::projection(std::span<const VarId> sub,
                                               std::span<const std::size_t> sub_cards) const {
  // Stride of each of our variables inside the sub-table (0 if absent).
  std::vector<std::size_t> stride(vars_.size(), 0);
  std::size_t s = 1;
  for (std::size_t k = sub.size(); k-- > 0;) {
    const std::size_t pos = position(sub[k]);
    if (pos == vars_.size()) throw Error("potential: projection onto a non-member variable");
    stride[pos] = s;
    s *= sub_cards[k];
  }

  std::vector<std::size_t> map(values_.size());
  std::vector<std::size_t> digit(vars_.size(), 0);
  std::size_t target = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    map[i] = target;
    // Odometer increment, last variable fastest.
    for (std::size_t k = vars_.size(); k-- > 0;) {
      if (++digit[k] < cards_[k]) {
        target += stride[k];
        break;
      }
      target -= stride[k] * (cards_[k] - 1);
      digit[k] = 0;
    }
  }
  return map;
}

Potential Potential::marginalize(std::span<const VarId> keep) const {
  std::vector<std::size_t> keep_cards;
  for (VarId v : keep) {
    const std::size_t pos = position(v);
    if (pos == vars_.size()) throw Error("potential: marginalizing onto a non-member variable");
    keep_cards.push_back(cards_[pos]);
  }
  Potential out(std::vector<VarId>(keep.begin(), keep.end()), keep_cards, 0.0);
  const auto map = projection(keep, keep_cards);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[map[i]] += values_[i];
  return out;
}

void Potential::multiply_in(const Potential& other) {
  const auto map = projection(other.vars_, other.cards_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[map[i]];
}

void Potential::multiply_in(VarId v, std::span<const double> vec) {
  const std::size_t pos = position(v);
  if (pos == vars_.size()) throw Error("potential: finding on a non-member variable");
  if (vec.size() != cards_[pos]) throw Error("potential: finding has wrong length");
  Potential factor({v}, {cards_[pos]});
  std::copy(vec.begin(), vec.end(), factor.values_.begin());
  multiply_in(factor);
}

Potential Potential::divide(const Potential& denominator) const {
  if (denominator.vars_ != vars_) throw Error("potential: dividing tables over different scopes");
  Potential out = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double d = denominator.values_[i];
    if (d == 0.0) {
      if (values_[i] != 0.0) {
        throw InconsistentPotential("positive entry divided by zero");
      }
      out.values_[i] = 0.0;
    } else {
      out.values_[i] = values_[i] / d;
    }
  }
  return out;
}

Potential cpt_potential(const Network& net, VarId v) {
  std::vector<VarId> vars = net.parents(v);
  vars.push_back(v);
  std::vector<std::size_t> cards;
  for (VarId u : vars) cards.push_back(net.variable(u).arity());
  Potential p(vars, cards, 0.0);
  const auto& cpt = net.cpt(v);
  const std::size_t arity = net.variable(v).arity();
  // Parents-major layout with v last is exactly the row-major CPT layout.
  for (std::size_t r = 0; r < cpt.size(); ++r) {
    for (std::size_t s = 0; s < arity; ++s) p[r * arity + s] = cpt[r][s];
  }
  return p;
}

}  // namespace bnsense
