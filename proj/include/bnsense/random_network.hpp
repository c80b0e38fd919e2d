#pragma once

#include <random>

#include "bnsense/evidence.hpp"
#include "bnsense/network.hpp"

namespace bnsense {

struct RandomNetworkOptions {
  std::size_t min_variables = 2;
  std::size_t max_variables = 8;
  std::size_t max_states = 3;
  std::size_t max_in_degree = 3;
  // Entries are drawn from [floor, 1) before row normalization, so every
  // parameter is strictly inside (0, 1).
  double entry_floor = 0.05;
};

// Random DAG (edges only from lower to higher id) with random CPTs.
Network random_network(std::mt19937_64& rng, const RandomNetworkOptions& options = {});

// Up to `max_findings` findings on distinct variables, mixing hard,
// negative and soft findings.
Evidence random_evidence(std::mt19937_64& rng, const Network& net, std::size_t max_findings);

}  // namespace bnsense
