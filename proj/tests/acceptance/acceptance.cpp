// Acceptance suite: prints one PASS/FAIL line per criterion, exits nonzero
// if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "bnsense/cli.hpp"
#include "bnsense/nway.hpp"
#include "bnsense/oneway.hpp"
#include "bnsense/relevance.hpp"
#include "support.hpp"

using namespace bnsense;

namespace {

constexpr std::size_t kCorpus = 250;
constexpr std::uint64_t kSeed = 424242;

struct Verdict {
  bool pass = true;
  std::string detail;
};

const std::vector<testing::Case>& corpus() {
  static const std::vector<testing::Case> cases = testing::corpus(kCorpus, kSeed);
  return cases;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Verdict oracle_oneway() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::size_t functions = 0;
  for (const auto& c : corpus()) {
    JunctionTree tree = build_junction_tree(c.net);
    for (const auto& sf : one_output_all_params_m1(tree, c.query).functions) {
      worst = std::max(worst, testing::coeff_diff(sf, oracle::fit_linear_sf(c.net, c.query, sf.param)));
      ++functions;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-9 && secs < 60.0,
          std::to_string(corpus().size()) + " networks, " + std::to_string(functions) +
              " functions, max deviation " + fmt("%.2e", worst) + ", " + fmt("%.1f", secs) + " s"};
}

Verdict method_equivalence() {
  double worst = 0.0;
  bool aligned = true;
  for (const auto& c : corpus()) {
    JunctionTree tree = build_junction_tree(c.net);
    const auto m1 = one_output_all_params_m1(tree, c.query).functions;
    const auto m2 = one_output_all_params_m2(tree, c.query).functions;
    if (m1.size() != m2.size()) {
      aligned = false;
      continue;
    }
    for (std::size_t k = 0; k < m1.size(); ++k) {
      aligned = aligned && m1[k].param == m2[k].param;
      worst = std::max(worst, testing::coeff_diff(m1[k], m2[k]));
    }
  }
  return {aligned && worst <= 1e-9, "max deviation " + fmt("%.2e", worst)};
}

Verdict propagation_counts() {
  std::size_t networks = 0, bad = 0;
  for (std::uint64_t seed = 1; networks < 60; ++seed) {
    RandomNetworkOptions opt;
    opt.min_variables = 4;
    opt.max_variables = 14;
    opt.max_states = 3;
    const testing::Case c = testing::make_case(kSeed * 7 + seed, opt);
    const std::size_t params = enumerate_parameters(c.net).size();
    if (params < 10 || params > 200) continue;
    ++networks;
    JunctionTree tree = build_junction_tree(c.net);
    for (int method = 1; method <= 2; ++method) {
      tree.reset_stats();
      if (method == 1) one_output_all_params_m1(tree, c.query, ParameterScope::all);
      else one_output_all_params_m2(tree, c.query, ParameterScope::all);
      bad += tree.stats().inward_propagations != 1 || tree.stats().outward_propagations != 2;
    }
    std::vector<VarId> targets(c.net.size());
    for (VarId v = 0; v < targets.size(); ++v) targets[v] = v;
    for (const ParameterRef& p : enumerate_parameters(c.net)) {
      if (p.initial_value <= 0.0 || p.initial_value >= 1.0) continue;
      tree.reset_stats();
      all_outputs_one_param(tree, p, c.query.evidence, targets);
      bad += tree.stats().inward_propagations != 1 || tree.stats().outward_propagations != 2;
    }
  }
  return {bad == 0, std::to_string(networks) + " networks with 10-200 parameters, " +
                        std::to_string(bad) + " runs off 1 inward + 2 outward"};
}

Verdict all_outputs_agreement() {
  double worst = 0.0;
  for (const auto& c : corpus()) {
    JunctionTree tree = build_junction_tree(c.net);
    std::vector<VarId> targets(c.net.size());
    for (VarId v = 0; v < targets.size(); ++v) targets[v] = v;
    std::vector<ParameterRef> params;
    for (const ParameterRef& p : enumerate_parameters(c.net)) {
      if (p.initial_value > 0.0 && p.initial_value < 1.0) params.push_back(p);
    }
    // Two parameters per network keep the run short.
    for (std::size_t i = 0; i < params.size(); i += std::max<std::size_t>(1, params.size() / 2)) {
      for (const auto& sf : all_outputs_one_param(tree, params[i], c.query.evidence, targets)) {
        const auto m1 = one_output_all_params_m1(tree, sf.query, ParameterScope::all);
        for (const auto& ref : m1.functions) {
          if (ref.param == sf.param) worst = std::max(worst, testing::coeff_diff(sf, ref));
        }
      }
    }
  }
  return {worst <= 1e-9, "max deviation " + fmt("%.2e", worst)};
}

std::vector<ParameterRef> pick(const Network& net, std::size_t n, std::optional<CliqueId> clique,
                               const JunctionTree& tree) {
  std::vector<ParameterRef> out;
  for (const ParameterRef& p : enumerate_parameters(net)) {
    if (out.size() == n) break;
    if (p.initial_value <= 0.0 || p.initial_value >= 1.0) continue;
    if (clique && tree.family_clique(p.variable) != *clique) continue;
    auto trial = out;
    trial.push_back(p);
    if (check_independent(net, trial)) out = trial;
  }
  return out;
}

Verdict same_clique_nway_check() {
  double worst = 0.0;
  std::size_t runs = 0, bad_counts = 0;
  for (const auto& c : corpus()) {
    JunctionTree tree = build_junction_tree(c.net);
    for (std::size_t n : {2, 3}) {
      for (CliqueId k = 0; k < tree.cliques().size(); ++k) {
        const auto ps = pick(c.net, n, k, tree);
        if (ps.size() != n) continue;
        tree.reset_stats();
        const auto mf = same_clique_nway(tree, ps, c.query.evidence);
        bad_counts += tree.stats().inward_propagations != 1 || tree.stats().outward_propagations != 1;
        worst = std::max(worst, testing::max_abs_diff(
                                    mf.coeffs(), oracle::fit_multilinear(c.net, c.query.evidence, ps).coeffs()));
        ++runs;
        break;
      }
    }
  }
  return {runs > 0 && worst <= 1e-9 && bad_counts == 0,
          std::to_string(runs) + " analyses, max deviation " + fmt("%.2e", worst) + ", " +
              std::to_string(bad_counts) + " off 1 inward + 1 outward"};
}

Verdict general_nway_check() {
  double worst = 0.0;
  std::size_t runs4 = 0, runs5 = 0, over4 = 0, over5 = 0, extra4 = 0, extra5 = 0;
  for (const auto& c : corpus()) {
    JunctionTree tree = build_junction_tree(c.net);
    const auto p4 = pick(c.net, 4, std::nullopt, tree);
    if (p4.size() == 4 && runs4 < 40) {
      const auto lower = oneway_lower_order(tree, p4, c.query.evidence);
      const NwayResult r = general_nway(c.net, p4, c.query.evidence, lower);
      worst = std::max(worst, testing::max_abs_diff(
                                  r.function.coeffs(),
                                  oracle::fit_multilinear(c.net, c.query.evidence, p4).coeffs()));
      over4 += r.additional_propagations > 1;
      extra4 = std::max(extra4, r.additional_propagations);
      ++runs4;
    }
    const auto p5 = pick(c.net, 5, std::nullopt, tree);
    if (p5.size() == 5 && runs5 < 20) {
      std::vector<LowerOrderResult> lower;
      std::vector<double> setting;
      for (const auto& p : p5) setting.push_back(p.initial_value);
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = i + 1; j < 5; ++j) {
          const auto pair = oracle::fit_multilinear(c.net, c.query.evidence, {p5[i], p5[j]});
          lower.push_back({{i, j}, setting, pair.coeffs()});
        }
      }
      const NwayResult r = general_nway(c.net, p5, c.query.evidence, lower);
      worst = std::max(worst, testing::max_abs_diff(
                                  r.function.coeffs(),
                                  oracle::fit_multilinear(c.net, c.query.evidence, p5).coeffs()));
      over5 += r.additional_propagations > 0;
      extra5 = std::max(extra5, r.additional_propagations);
      ++runs5;
    }
  }
  const bool coeffs_ok = worst <= 1e-8;
  const bool counts_ok = over4 == 0 && over5 == 0;
  std::string detail = "coefficients " + std::string(coeffs_ok ? "ok" : "off") +
                       " (max deviation " + fmt("%.2e", worst) + "); n=4: " +
                       std::to_string(over4) + "/" + std::to_string(runs4) +
                       " runs needed more than 1 extra propagation (max " + std::to_string(extra4) +
                       "); n=5: " + std::to_string(over5) + "/" + std::to_string(runs5) +
                       " runs needed extra propagations (max " + std::to_string(extra5) + ")";
  return {runs4 > 0 && runs5 > 0 && coeffs_ok && counts_ok, detail};
}

Verdict fixtures() {
  double worst = 0.0;
  auto diff = [&](double got, double want) { worst = std::max(worst, std::abs(got - want)); };
  const Network n1 = testing::r1();
  const Network n2 = testing::r2();

  diff(oracle::brute_joint(n1, std::vector<std::size_t>{0, 0}), 0.18);
  diff(oracle::brute_joint(n2, std::vector<std::size_t>{0, 0, 0}), 0.126);

  JunctionTree t1 = build_junction_tree(n1);
  diff(propagate_full(t1, parse_evidence(n1, "B=yes"), 0), 0.42);
  JunctionTree t2 = build_junction_tree(n2);
  diff(propagate_full(t2, parse_evidence(n2, "C=yes"), 0), 0.352);
  diff(t2.marginal(0)[0], 0.128);
  diff(t2.marginal(0)[1], 0.224);

  QueryRef q1{0, 0, parse_evidence(n1, "B=yes")};
  const auto r1 = one_output_all_params_m1(t1, q1).functions;
  const std::vector<std::vector<double>> want1{{0.9, 0, 0.6, 0.3}, {-0.9, 0.9, -0.6, 0.9},
                                              {0.2, 0, 0.2, 0.24}, {-0.2, 0.2, -0.2, 0.44},
                                              {0, 0.18, 0.8, 0.18}, {0, 0.18, -0.8, 0.98}};
  if (r1.size() != want1.size()) return {false, "r1 method 1 returned a wrong function count"};
  for (std::size_t k = 0; k < r1.size(); ++k) {
    diff(r1[k].alpha(), want1[k][0]);
    diff(r1[k].beta(), want1[k][1]);
    diff(r1[k].gamma(), want1[k][2]);
    diff(r1[k].delta(), want1[k][3]);
  }
  diff(derivative(r1[0], 0.2), 0.27 / 0.1764);

  QueryRef q2{0, 0, parse_evidence(n2, "C=yes")};
  const ParameterRef b_given_a = parse_parameter(n2, "B|A=yes:yes");
  for (const auto& sf : one_output_all_params_m1(t2, q2).functions) {
    if (!(sf.param == b_given_a)) continue;
    diff(sf.alpha(), 0.12);
    diff(sf.beta(), 0.02);
    diff(sf.gamma(), 0.12);
    diff(sf.delta(), 0.244);
  }
  const auto brute_sf = oracle::fit_linear_sf(n2, q2, b_given_a);
  diff(brute_sf.alpha(), 0.12);
  diff(brute_sf.beta(), 0.02);

  const std::vector<ParameterRef> nw{parse_parameter(n2, "A:yes"), parse_parameter(n2, "C|B=yes:yes")};
  const std::vector<double> want_nw{0.07, -0.06, 0.3, 0.6};
  const auto general = general_nway(n2, nw, q2.evidence, oneway_lower_order(t2, nw, q2.evidence));
  const auto brute_nw = oracle::fit_multilinear(n2, q2.evidence, nw);
  for (std::size_t z = 0; z < 4; ++z) {
    diff(general.function.coeffs()[z], want_nw[z]);
    diff(brute_nw.coeffs()[z], want_nw[z]);
  }
  const std::vector<ParameterRef> same{parse_parameter(n1, "B|A=yes:yes"),
                                       parse_parameter(n1, "B|A=no:yes")};
  const std::vector<double> want_same{0.0, 0.2, 0.8, 0.0};
  const auto mf = same_clique_nway(t1, same, q1.evidence);
  for (std::size_t z = 0; z < 4; ++z) diff(mf.coeffs()[z], want_same[z]);

  std::ostringstream out, err;
  const int code = cli::main_entry({"bnsense", "infer", "--net", testing::fixture("r1.json"),
                                    "--evidence", "B=yes", "--target", "A"},
                                   out, err);
  const bool cli_ok = code == 0 && out.str() == "A yes 0.4285714286\nA no 0.5714285714\n";
  return {worst <= 1e-12 && cli_ok,
          "max deviation " + fmt("%.2e", worst) + (cli_ok ? "" : ", infer output differs")};
}

Verdict retraction() {
  double worst = 0.0;
  std::size_t retractions = 0;
  for (const auto& c : corpus()) {
    if (c.query.evidence.size() < 2) continue;
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
        worst = std::max(worst, testing::max_abs_diff(retracted.marginal(u), fresh.marginal(u)));
      }
      ++retractions;
    }
  }
  return {retractions > 0 && worst <= 1e-9,
          std::to_string(retractions) + " retractions, max deviation " + fmt("%.2e", worst)};
}

Verdict structure() {
  std::size_t broken = 0;
  double worst = 0.0;
  for (const auto& c : corpus()) {
    JunctionTree tree = build_junction_tree(c.net);
    broken += !testing::running_intersection(tree);
    const double pe = propagate_full(tree, c.query.evidence, 0);
    worst = std::max({worst, testing::sepset_inconsistency(tree),
                      testing::clique_sum_spread(tree, pe)});
  }
  return {broken == 0 && worst <= 1e-9, std::to_string(broken) +
                                            " running-intersection violations, max inconsistency " +
                                            fmt("%.2e", worst)};
}

Verdict screening() {
  double worst = 0.0;
  std::size_t excluded = 0;
  for (const auto& c : corpus()) {
    const auto relevant = relevant_parameters(c.net, c.query);
    for (const ParameterRef& p : enumerate_parameters(c.net)) {
      if (std::find(relevant.begin(), relevant.end(), p) != relevant.end()) continue;
      if (p.initial_value >= 1.0) continue;
      ++excluded;
      const auto here = oracle::brute_query(c.net, c.query);
      const double y0 = here.joint / here.evidence;
      for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const auto m = oracle::brute_query(apply_parameter(c.net, p, x), c.query);
        if (m.evidence <= 0.0) continue;
        worst = std::max(worst, std::abs(m.joint / m.evidence - y0));
      }
    }
  }
  return {worst < 1e-12, std::to_string(excluded) + " excluded parameters, max residual " +
                             fmt("%.2e", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"1 oracle equivalence, one-way", oracle_oneway},
      {"2 method 1 / method 2 equivalence", method_equivalence},
      {"3 propagation counts (sens-out, sens-param)", propagation_counts},
      {"4 all-outputs vs per-output method 1", all_outputs_agreement},
      {"5 same-clique n-way", same_clique_nway_check},
      {"6 general n-way", general_nway_check},
      {"7 fixture reproduction", fixtures},
      {"8 fast retraction", retraction},
      {"9 structural invariants", structure},
      {"10 screening soundness", screening},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
