#pragma once

#include <vector>

#include "bnsense/evidence.hpp"
#include "bnsense/network.hpp"

namespace bnsense {

// True when a dummy parent attached to `variable` is d-connected to the query
// variable given the findings. Hard findings condition on the variable
// itself; soft and negative findings act as an observed virtual child.
bool parameters_may_influence(const Network& net, VarId variable, const QueryRef& query);

// Every parameter that is not provably without influence on p(a | e), in
// enumerate_parameters order.
std::vector<ParameterRef> relevant_parameters(const Network& net, const QueryRef& query);

}  // namespace bnsense
