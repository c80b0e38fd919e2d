#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bnsense/jtree.hpp"
#include "bnsense/nway.hpp"
#include "bnsense/oneway.hpp"

namespace bnsense {

// Ten significant digits in scientific notation, e.g. 9.000000000e-01.
std::string format_real(double x);

inline constexpr const char* kOneWayCsvHeader =
    "parameter,variable,state,parent_config,alpha,beta,gamma,delta,y_at_x0,dy_dx_at_x0";
inline constexpr const char* kParamCsvHeader =
    "target,state,alpha,beta,gamma,delta,y_at_x0,dy_dx_at_x0";

// One row per function, in the given order, after the header.
void write_oneway_csv(std::ostream& out, const Network& net,
                      const std::vector<SensitivityFunction>& functions, bool header = true);
void write_param_csv(std::ostream& out, const Network& net,
                     const std::vector<SensitivityFunction>& functions);
// {"params":[...],"coefficients":{"{}":c,"{0}":...}} with keys ordered by
// subset size, then lexicographically.
void write_nway_json(std::ostream& out, const Network& net, const MultilinearFunction& mf);
// inward=<n> outward=<n> messages=<n>
void write_stats(std::ostream& out, const PropagationStats& stats);

}  // namespace bnsense
