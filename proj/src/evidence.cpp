#include "bnsense/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bnsense/error.hpp"

namespace bnsense {

void Evidence::add_hard(const Network& net, VarId v, std::size_t state) {
  std::vector<double> vec(net.variable(v).arity(), 0.0);
  vec.at(state) = 1.0;
  add_likelihood(net, v, std::move(vec));
}

void Evidence::add_negative(const Network& net, VarId v, std::size_t state) {
  std::vector<double> vec(net.variable(v).arity(), 1.0);
  vec.at(state) = 0.0;
  add_likelihood(net, v, std::move(vec));
}

void Evidence::add_likelihood(const Network& net, VarId v, std::vector<double> likelihood) {
  const Variable& var = net.variable(v);
  if (likelihood.size() != var.arity()) {
    throw UsageError("finding on '" + var.name + "' has " + std::to_string(likelihood.size()) +
                     " entries, expected " + std::to_string(var.arity()));
  }
  for (double x : likelihood) {
    if (!std::isfinite(x) || x < 0.0) {
      throw UsageError("finding on '" + var.name + "' has a negative or non-finite entry");
    }
  }
  auto it = findings_.find(v);
  if (it != findings_.end()) {
    for (std::size_t s = 0; s < likelihood.size(); ++s) likelihood[s] *= it->second[s];
  }
  if (std::none_of(likelihood.begin(), likelihood.end(), [](double x) { return x > 0.0; })) {
    throw ImpossibleEvidence("findings on '" + var.name + "' exclude every state");
  }
  findings_[v] = std::move(likelihood);
}

bool Evidence::is_hard(VarId v) const {
  const auto& vec = findings_.at(v);
  return std::count_if(vec.begin(), vec.end(), [](double x) { return x > 0.0; }) == 1;
}

Evidence Evidence::without(VarId v) const {
  Evidence out = *this;
  out.findings_.erase(v);
  return out;
}

Evidence parse_evidence(const Network& net, std::string_view text) {
  Evidence ev;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    text = (comma == std::string_view::npos) ? std::string_view{} : text.substr(comma + 1);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;

    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw UsageError("evidence item '" + std::string(item) + "' is not VAR=state or VAR!=state");
    }
    const bool negative = item[eq - 1] == '!';
    std::string_view name = item.substr(0, negative ? eq - 1 : eq);
    std::string_view state = item.substr(eq + 1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    while (!state.empty() && state.front() == ' ') state.remove_prefix(1);
    try {
      const VarId v = net.id_of(name);
      const std::size_t s = net.state_index(v, state);
      if (negative) {
        ev.add_negative(net, v, s);
      } else {
        ev.add_hard(net, v, s);
      }
    } catch (const NetworkError& e) {
      throw UsageError(e.what());
    }
  }
  return ev;
}

}  // namespace bnsense
