#include <doctest.h>

#include "bnsense/error.hpp"
#include "bnsense/graph.hpp"
#include "support.hpp"

using namespace bnsense;

TEST_CASE("moralization marries co-parents") {
  const Network net = load_network(R"({
    "variables":[{"name":"A","states":["y","n"]},{"name":"B","states":["y","n"]},{"name":"C","states":["y","n"]}],
    "cpts":[{"variable":"A","parents":[],"rows":[[0.5,0.5]]},
            {"variable":"B","parents":[],"rows":[[0.5,0.5]]},
            {"variable":"C","parents":["A","B"],"rows":[[0.1,0.9],[0.2,0.8],[0.3,0.7],[0.4,0.6]]}]})");
  const UndirectedGraph g = moralize(net);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(0, 2));
  CHECK(g.edges().size() == 3);
}

TEST_CASE("min-fill triangulation of a four-cycle adds one chord") {
  UndirectedGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 0);
  const Triangulation t = triangulate(g);
  CHECK(t.fill_edges.size() == 1);
  CHECK(t.fill_edges.count({1, 3}) == 1);
  CHECK(t.order.front() == 0);
}

TEST_CASE("r2 compiles to two cliques joined on B") {
  const JunctionTree tree = build_junction_tree(testing::r2());
  REQUIRE(tree.cliques().size() == 2);
  CHECK(tree.clique(0).members == std::vector<VarId>{0, 1});
  CHECK(tree.clique(1).members == std::vector<VarId>{1, 2});
  REQUIRE(tree.sepsets().size() == 1);
  CHECK(tree.sepsets()[0].members == std::vector<VarId>{1});
  CHECK(tree.family_clique(2) == 1);
  CHECK(jtree_to_json(tree) ==
        R"({"cliques":[{"id":0,"members":["A","B"],"families":["A","B"]},{"id":1,"members":["B","C"],"families":["C"]}],"sepsets":[{"cliques":[0,1],"members":["B"]}],"edges":[[0,1]]})");
}

TEST_CASE("r2 collect and distribute reproduce hand-computed marginals") {
  JunctionTree tree = build_junction_tree(testing::r2());
  Evidence ev;
  ev.add_hard(tree.network(), 2, 0);
  tree.reset();
  tree.enter_evidence(ev);
  tree.collect(0);
  CHECK(tree.clique(0).potential.sum() == doctest::Approx(0.352).epsilon(1e-12));
  CHECK(tree.clique(0).potential[0] == doctest::Approx(0.126).epsilon(1e-12));
  CHECK_FALSE(tree.consistent());
  tree.distribute(0);
  CHECK(tree.consistent());
  CHECK(tree.clique(1).potential[0] == doctest::Approx(0.294).epsilon(1e-12));
  const auto a = tree.marginal(0);
  CHECK(a[0] == doctest::Approx(0.128).epsilon(1e-12));
  CHECK(a[1] == doctest::Approx(0.224).epsilon(1e-12));
  CHECK(tree.stats().inward_propagations == 1);
  CHECK(tree.stats().outward_propagations == 1);
}

TEST_CASE("distribute without a prior collect is rejected") {
  JunctionTree tree = build_junction_tree(testing::r2());
  CHECK_THROWS(tree.distribute(0));
}

TEST_CASE("propagation matches enumeration and keeps the tree invariants") {
  for (const auto& c : testing::corpus(60, 500)) {
    CAPTURE(c.seed);
    JunctionTree tree = build_junction_tree(c.net);
    CHECK(testing::running_intersection(tree));
    const double pe = propagate_full(tree, c.query.evidence, 0);
    CHECK(pe == doctest::Approx(oracle::brute_evidence(c.net, c.query.evidence)).epsilon(1e-12));
    CHECK(testing::sepset_inconsistency(tree) < 1e-12);
    CHECK(testing::clique_sum_spread(tree, pe) < 1e-12);
    for (VarId v = 0; v < c.net.size(); ++v) {
      CHECK(testing::max_abs_diff(tree.marginal(v),
                                  oracle::brute_marginal(c.net, v, c.query.evidence)) < 1e-12);
    }
  }
}

TEST_CASE("clique product over sepset product equals the evidence-weighted joint") {
  for (const auto& c : testing::corpus(25, 900)) {
    CAPTURE(c.seed);
    JunctionTree tree = build_junction_tree(c.net);
    propagate_full(tree, c.query.evidence, 0);
    std::vector<std::size_t> a(c.net.size(), 0);
    double worst = 0.0;
    while (true) {
      double expected = oracle::brute_joint(c.net, a);
      for (const auto& [v, vec] : c.query.evidence.findings()) expected *= vec[a[v]];
      double num = 1.0, den = 1.0;
      for (const Clique& k : tree.cliques()) num *= testing::at(k.potential, a);
      for (const Sepset& s : tree.sepsets()) den *= testing::at(s.potential, a);
      const double got = den == 0.0 ? 0.0 : num / den;
      worst = std::max(worst, std::abs(got - expected));
      std::size_t k = a.size();
      while (k-- > 0) {
        if (++a[k] < c.net.variable(k).arity()) break;
        a[k] = 0;
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("fast retraction equals fresh propagation with reduced evidence") {
  for (const auto& c : testing::corpus(60, 1300)) {
    CAPTURE(c.seed);
    JunctionTree base = build_junction_tree(c.net);
    propagate_full(base, c.query.evidence, 0);
    for (const auto& [v, vec] : c.query.evidence.findings()) {
      const Evidence reduced = c.query.evidence.without(v);
      if (oracle::brute_evidence(c.net, reduced) <= 0.0) continue;
      JunctionTree retracted = base;
      retracted.retract_finding(v);
      JunctionTree fresh = build_junction_tree(c.net);
      propagate_full(fresh, reduced, 0);
      for (VarId u = 0; u < c.net.size(); ++u) {
        CHECK(testing::max_abs_diff(retracted.marginal(u), fresh.marginal(u)) < 1e-12);
      }
      CHECK(testing::sepset_inconsistency(retracted) < 1e-12);
    }
  }
}

TEST_CASE("impossible evidence is reported") {
  JunctionTree tree = build_junction_tree(load_network(R"({
    "variables":[{"name":"A","states":["y","n"]},{"name":"B","states":["y","n"]}],
    "cpts":[{"variable":"A","parents":[],"rows":[[1.0,0.0]]},
            {"variable":"B","parents":["A"],"rows":[[1.0,0.0],[0.5,0.5]]}]})"));
  Evidence ev;
  ev.add_hard(tree.network(), 1, 1);
  CHECK_THROWS_AS(propagate_full(tree, ev, 0), ImpossibleEvidence);
}

TEST_CASE("disconnected networks compile to a forest joined by empty sepsets") {
  const Network net = load_network(R"({
    "variables":[{"name":"A","states":["y","n"]},{"name":"B","states":["y","n"]}],
    "cpts":[{"variable":"A","parents":[],"rows":[[0.3,0.7]]},
            {"variable":"B","parents":[],"rows":[[0.6,0.4]]}]})");
  JunctionTree tree = build_junction_tree(net);
  REQUIRE(tree.cliques().size() == 2);
  REQUIRE(tree.sepsets().size() == 1);
  CHECK(tree.sepsets()[0].members.empty());
  Evidence ev;
  ev.add_hard(net, 1, 0);
  CHECK(propagate_full(tree, ev, 0) == doctest::Approx(0.6));
  CHECK(tree.marginal(0)[0] == doctest::Approx(0.18));
}

TEST_CASE("compilation is deterministic") {
  for (const auto& c : testing::corpus(20, 77)) {
    CHECK(jtree_to_json(build_junction_tree(c.net)) == jtree_to_json(build_junction_tree(c.net)));
  }
}
