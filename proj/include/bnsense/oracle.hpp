#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bnsense/evidence.hpp"
#include "bnsense/network.hpp"
#include "bnsense/nway.hpp"
#include "bnsense/oneway.hpp"

// Ground truth by enumeration of the full joint distribution. Test
// instrument only: exponential in the number of variables.
namespace bnsense::oracle {

inline constexpr std::size_t kMaxJointStates = std::size_t{1} << 20;

// Product of the CPT entries selected by a full assignment.
double brute_joint(const Network& net, std::span<const std::size_t> assignment);

struct QueryMass {
  double joint = 0.0;     // p(a, e)
  double evidence = 0.0;  // p(e)
};

// Throws AnalysisError if the joint state space exceeds kMaxJointStates.
QueryMass brute_query(const Network& net, const QueryRef& query);
double brute_evidence(const Network& net, const Evidence& evidence);
// p(v, e) for every state of v.
std::vector<double> brute_marginal(const Network& net, VarId v, const Evidence& evidence);

// Lines through x = 0 and x = 1, with the midpoint as a linearity witness
// (AnalysisError beyond 1e-10).
SensitivityFunction fit_linear_sf(const Network& net, const QueryRef& query,
                                  const ParameterRef& param);

// Multilinear interpolation of p(e) on the {0,1}^n grid, verified at the
// all-1/2 point (AnalysisError beyond 1e-10).
MultilinearFunction fit_multilinear(const Network& net, const Evidence& evidence,
                                    const std::vector<ParameterRef>& params);

}  // namespace bnsense::oracle
