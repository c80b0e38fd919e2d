#include "bnsense/report.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace bnsense {

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", x);
  return buf;
}

namespace {

// Evaluation at the operating point; undefined points are left empty.
std::pair<std::string, std::string> operating_point(const SensitivityFunction& sf) {
  const double x0 = sf.param.initial_value;
  if (!(sf.denominator(x0) > 0.0)) return {"", ""};
  return {format_real(evaluate(sf, x0)), format_real(derivative(sf, x0))};
}

}  // namespace

void write_oneway_csv(std::ostream& out, const Network& net,
                      const std::vector<SensitivityFunction>& functions, bool header) {
  if (header) out << kOneWayCsvHeader << '\n';
  for (const SensitivityFunction& sf : functions) {
    const Variable& v = net.variable(sf.param.variable);
    const auto [y, dy] = operating_point(sf);
    out << parameter_label(net, sf.param) << ',' << v.name << ',' << v.states[sf.param.state_index]
        << ',' << parent_config_label(net, sf.param) << ',' << format_real(sf.alpha()) << ','
        << format_real(sf.beta()) << ',' << format_real(sf.gamma()) << ','
        << format_real(sf.delta()) << ',' << y << ',' << dy << '\n';
  }
}

void write_param_csv(std::ostream& out, const Network& net,
                     const std::vector<SensitivityFunction>& functions) {
  out << kParamCsvHeader << '\n';
  for (const SensitivityFunction& sf : functions) {
    const Variable& v = net.variable(sf.query.variable);
    const auto [y, dy] = operating_point(sf);
    out << v.name << ',' << v.states[sf.query.state_index] << ',' << format_real(sf.alpha())
        << ',' << format_real(sf.beta()) << ',' << format_real(sf.gamma()) << ','
        << format_real(sf.delta()) << ',' << y << ',' << dy << '\n';
  }
}

void write_nway_json(std::ostream& out, const Network& net, const MultilinearFunction& mf) {
  nlohmann::ordered_json doc;
  doc["params"] = nlohmann::ordered_json::array();
  for (const ParameterRef& p : mf.params()) doc["params"].push_back(parameter_label(net, p));

  std::vector<std::uint32_t> order(mf.coeffs().size());
  for (std::uint32_t z = 0; z < order.size(); ++z) order[z] = z;
  auto members = [](std::uint32_t z) {
    std::vector<int> m;
    for (int k = 0; k < 32; ++k) {
      if ((z >> k) & 1U) m.push_back(k);
    }
    return m;
  };
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto ma = members(a), mb = members(b);
    if (ma.size() != mb.size()) return ma.size() < mb.size();
    return ma < mb;
  });
  doc["coefficients"] = nlohmann::ordered_json::object();
  for (std::uint32_t z : order) doc["coefficients"][subset_key(SubsetIndex{z})] = mf.coeffs()[z] + 0.0;
  out << doc.dump() << '\n';
}

void write_stats(std::ostream& out, const PropagationStats& stats) {
  out << "inward=" << stats.inward_propagations << " outward=" << stats.outward_propagations
      << " messages=" << stats.messages_passed << '\n';
}

}  // namespace bnsense
