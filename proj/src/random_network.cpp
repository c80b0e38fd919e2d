#include "bnsense/random_network.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace bnsense {

Network random_network(std::mt19937_64& rng, const RandomNetworkOptions& options) {
  std::uniform_int_distribution<std::size_t> count(options.min_variables, options.max_variables);
  std::uniform_int_distribution<std::size_t> arity(2, std::max<std::size_t>(2, options.max_states));
  std::uniform_real_distribution<double> entry(options.entry_floor, 1.0);

  const std::size_t n = count(rng);
  std::vector<Variable> vars(n);
  for (std::size_t v = 0; v < n; ++v) {
    vars[v].id = v;
    vars[v].name = "X" + std::to_string(v);
    const std::size_t m = arity(rng);
    for (std::size_t s = 0; s < m; ++s) vars[v].states.push_back("s" + std::to_string(s));
  }

  std::vector<std::vector<VarId>> parents(n);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> degree(0, std::min(v, options.max_in_degree));
    std::vector<VarId> pool(v);
    std::iota(pool.begin(), pool.end(), VarId{0});
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(degree(rng));
    std::sort(pool.begin(), pool.end());
    parents[v] = std::move(pool);
  }

  std::vector<std::vector<std::vector<double>>> cpts(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rows = 1;
    for (VarId p : parents[v]) rows *= vars[p].arity();
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> row(vars[v].arity());
      for (double& x : row) x = entry(rng);
      const double sum = std::accumulate(row.begin(), row.end(), 0.0);
      for (double& x : row) x /= sum;
      cpts[v].push_back(std::move(row));
    }
  }
  return Network(std::move(vars), std::move(parents), std::move(cpts));
}

Evidence random_evidence(std::mt19937_64& rng, const Network& net, std::size_t max_findings) {
  std::vector<VarId> order(net.size());
  std::iota(order.begin(), order.end(), VarId{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<std::size_t> how_many(0, std::min(max_findings, net.size()));
  order.resize(how_many(rng));

  Evidence ev;
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_real_distribution<double> weight(0.1, 1.0);
  for (VarId v : order) {
    std::uniform_int_distribution<std::size_t> state(0, net.variable(v).arity() - 1);
    switch (kind(rng)) {
      case 0:
        ev.add_hard(net, v, state(rng));
        break;
      case 1:
        ev.add_negative(net, v, state(rng));
        break;
      default: {
        std::vector<double> vec(net.variable(v).arity());
        for (double& x : vec) x = weight(rng);
        ev.add_likelihood(net, v, std::move(vec));
      }
    }
  }
  return ev;
}

}  // namespace bnsense
