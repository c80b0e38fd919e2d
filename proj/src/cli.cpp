#include "bnsense/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "bnsense/error.hpp"
#include "bnsense/evidence.hpp"
#include "bnsense/jtree.hpp"
#include "bnsense/network.hpp"
#include "bnsense/nway.hpp"
#include "bnsense/oneway.hpp"
#include "bnsense/oracle.hpp"
#include "bnsense/random_network.hpp"
#include "bnsense/report.hpp"

namespace bnsense::cli {

namespace {

constexpr double kMethodAgreement = 1e-9;
constexpr double kCheckTolerance = 1e-9;

struct Target {
  VarId variable;
  std::optional<std::size_t> state;
};

Target parse_target(const Network& net, std::string_view text) {
  try {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) return {net.id_of(text), std::nullopt};
    const VarId v = net.id_of(text.substr(0, eq));
    return {v, net.state_index(v, text.substr(eq + 1))};
  } catch (const NetworkError& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  while (!text.empty()) {
    const auto pos = text.find(sep);
    std::string item(text.substr(0, pos));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

std::vector<std::size_t> target_states(const Network& net, const Target& t) {
  if (t.state) return {*t.state};
  std::vector<std::size_t> all(net.variable(t.variable).arity());
  for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
  return all;
}

std::string fixed10(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10f", x);
  return buf;
}

void run_infer(const Command& c, const Network& net, std::ostream& out, std::ostream& err) {
  const Evidence ev = parse_evidence(net, c.evidence);
  std::vector<Target> targets;
  if (c.target.empty()) {
    for (VarId v = 0; v < net.size(); ++v) targets.push_back({v, std::nullopt});
  } else {
    for (const auto& t : split(c.target, ',')) targets.push_back(parse_target(net, t));
  }
  JunctionTree tree = build_junction_tree(net);
  const double pe = propagate_full(tree, ev, 0);
  for (const Target& t : targets) {
    const auto m = tree.marginal(t.variable);
    for (std::size_t s : target_states(net, t)) {
      out << net.variable(t.variable).name << ' ' << net.variable(t.variable).states[s] << ' '
          << fixed10(m[s] / pe) << '\n';
    }
  }
  if (c.stats) write_stats(err, tree.stats());
}

double max_deviation(const std::vector<SensitivityFunction>& a,
                     const std::vector<SensitivityFunction>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!(a[k].param == b[k].param)) return INFINITY;
    worst = std::max({worst, std::abs(a[k].alpha() - b[k].alpha()),
                      std::abs(a[k].beta() - b[k].beta()), std::abs(a[k].gamma() - b[k].gamma()),
                      std::abs(a[k].delta() - b[k].delta())});
  }
  return worst;
}

void report_skipped(const Network& net, const OneWayResult& r, std::ostream& err) {
  for (const SkippedParameter& s : r.skipped) {
    err << "warning: skipped " << parameter_label(net, s.param) << ": " << s.reason << '\n';
  }
}

void run_sens_out(const Command& c, const Network& net, std::ostream& out, std::ostream& err) {
  if (c.target.empty()) throw UsageError("sens-out needs --target");
  const Target target = parse_target(net, c.target);
  const std::string method = c.method.empty() ? "1" : c.method;
  if (method != "1" && method != "2" && method != "both") {
    throw UsageError("--method must be 1, 2 or both");
  }
  const Evidence ev = parse_evidence(net, c.evidence);
  JunctionTree tree = build_junction_tree(net);
  const auto states = target_states(net, target);
  for (std::size_t s : states) {
    const QueryRef query{target.variable, s, ev};
    OneWayResult result;
    if (method == "2") {
      result = one_output_all_params_m2(tree, query);
    } else {
      result = one_output_all_params_m1(tree, query);
    }
    if (method == "both") {
      const OneWayResult second = one_output_all_params_m2(tree, query);
      const double dev = max_deviation(result.functions, second.functions);
      if (!(dev <= kMethodAgreement)) {
        std::ostringstream msg;
        msg << "methods 1 and 2 disagree by " << dev;
        throw AnalysisError(msg.str());
      }
    }
    report_skipped(net, result, err);
    if (states.size() > 1) {
      out << "# target " << net.variable(target.variable).name << '='
          << net.variable(target.variable).states[s] << '\n';
    }
    write_oneway_csv(out, net, result.functions);
  }
  if (c.stats) write_stats(err, tree.stats());
}

void run_sens_param(const Command& c, const Network& net, std::ostream& out, std::ostream& err) {
  if (c.param.empty()) throw UsageError("sens-param needs --param");
  const ParameterRef param = parse_parameter(net, c.param);
  const Evidence ev = parse_evidence(net, c.evidence);
  std::vector<Target> targets;
  if (c.target.empty()) {
    for (VarId v = 0; v < net.size(); ++v) targets.push_back({v, std::nullopt});
  } else {
    for (const auto& t : split(c.target, ',')) targets.push_back(parse_target(net, t));
  }
  std::vector<VarId> vars;
  for (const Target& t : targets) {
    if (std::find(vars.begin(), vars.end(), t.variable) == vars.end()) vars.push_back(t.variable);
  }
  JunctionTree tree = build_junction_tree(net);
  const auto all = all_outputs_one_param(tree, param, ev, vars);
  std::vector<SensitivityFunction> selected;
  for (const Target& t : targets) {
    for (const SensitivityFunction& sf : all) {
      if (sf.query.variable == t.variable && (!t.state || *t.state == sf.query.state_index)) {
        selected.push_back(sf);
      }
    }
  }
  write_param_csv(out, net, selected);
  if (c.stats) write_stats(err, tree.stats());
}

void run_sens_n(const Command& c, const Network& net, std::ostream& out, std::ostream& err) {
  if (c.params.empty()) throw UsageError("sens-n needs --params");
  std::vector<ParameterRef> params;
  for (const auto& p : split(c.params, ',')) params.push_back(parse_parameter(net, p));
  const Evidence ev = parse_evidence(net, c.evidence);
  const std::string method = c.method.empty() ? "auto" : c.method;
  if (method != "auto" && method != "same-clique" && method != "general") {
    throw UsageError("--method must be auto, same-clique or general");
  }
  JunctionTree tree = build_junction_tree(net);
  const bool same = method == "same-clique" ||
                    (method == "auto" && common_family_clique(tree, params).has_value());
  if (same) {
    const MultilinearFunction mf = same_clique_nway(tree, params, ev);
    write_nway_json(out, net, mf);
    if (c.stats) write_stats(err, tree.stats());
    return;
  }
  if (!check_independent(net, params)) throw AnalysisError("parameters are not independent");
  const auto lower = oneway_lower_order(tree, params, ev);
  const NwayResult r = general_nway(net, params, ev, lower);
  write_nway_json(out, net, r.function);
  if (c.stats) {
    PropagationStats total = tree.stats();
    total.inward_propagations += r.stats.inward_propagations;
    total.outward_propagations += r.stats.outward_propagations;
    total.messages_passed += r.stats.messages_passed;
    write_stats(err, total);
    err << "planned_extra=" << r.planned_propagations
        << " extra_propagations=" << r.additional_propagations << '\n';
  }
}

void run_check(const Command& c, const std::optional<Network>& given, std::ostream& out,
               std::ostream& err) {
  std::uint64_t seed = 1;
  if (const char* env = std::getenv("BN_SENSE_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("BN_SENSE_SEED must be an unsigned integer");
    }
  }
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::size_t functions = 0;
  for (std::size_t t = 0; t < c.trials; ++t) {
    const Network net = given ? *given : random_network(rng);
    Evidence ev;
    // Resample evidence the network rules out.
    for (int attempt = 0; attempt < 100; ++attempt) {
      ev = random_evidence(rng, net, 3);
      if (oracle::brute_evidence(net, ev) > 0.0) break;
    }
    std::uniform_int_distribution<VarId> pick_var(0, net.size() - 1);
    const VarId a = pick_var(rng);
    std::uniform_int_distribution<std::size_t> pick_state(0, net.variable(a).arity() - 1);
    const QueryRef query{a, pick_state(rng), ev};

    JunctionTree tree = build_junction_tree(net);
    const OneWayResult m1 = one_output_all_params_m1(tree, query);
    const OneWayResult m2 = one_output_all_params_m2(tree, query);
    std::vector<SensitivityFunction> brute;
    for (const SensitivityFunction& sf : m1.functions) {
      brute.push_back(oracle::fit_linear_sf(net, query, sf.param));
    }
    worst = std::max({worst, max_deviation(m1.functions, brute),
                      max_deviation(m2.functions, brute)});
    functions += m1.functions.size();
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", worst);
  out << "trials=" << c.trials << " functions=" << functions << " max_abs_deviation=" << buf
      << '\n';
  if (!(worst <= kCheckTolerance)) {
    err << "deviation exceeds " << kCheckTolerance << '\n';
    throw AnalysisError("oracle comparison failed");
  }
}

void run_stats(const Command& c, const Network& net, std::ostream& out) {
  const Evidence ev = parse_evidence(net, c.evidence);
  JunctionTree tree = build_junction_tree(net);
  const double pe = propagate_full(tree, ev, 0);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", pe);
  out << "cliques=" << tree.cliques().size() << " sepsets=" << tree.sepsets().size()
      << " p_e=" << buf << '\n';
  write_stats(out, tree.stats());
}

void dispatch(const Command& c, std::ostream& out, std::ostream& err) {
  if (c.kind == CommandKind::check) {
    std::optional<Network> net;
    if (!c.net.empty()) net = load_network_file(c.net);
    run_check(c, net, out, err);
    return;
  }
  const Network net = load_network_file(c.net);
  switch (c.kind) {
    case CommandKind::infer:
      run_infer(c, net, out, err);
      break;
    case CommandKind::sens_out:
      run_sens_out(c, net, out, err);
      break;
    case CommandKind::sens_param:
      run_sens_param(c, net, out, err);
      break;
    case CommandKind::sens_n:
      run_sens_n(c, net, out, err);
      break;
    case CommandKind::stats:
      run_stats(c, net, out);
      break;
    case CommandKind::dump_jtree:
      out << jtree_to_json(build_junction_tree(net)) << '\n';
      break;
    default:
      break;
  }
}

}  // namespace

Command parse_args(const std::vector<std::string>& argv) {
  Command cmd;
  CLI::App app{"Exact inference and sensitivity functions for discrete Bayesian networks",
               "bnsense"};
  app.require_subcommand(1);

  auto add_net = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--net", cmd.net, "Network JSON file");
    if (required) opt->required();
  };
  auto add_evidence = [&](CLI::App* sub) {
    sub->add_option("--evidence", cmd.evidence, "Findings, e.g. \"B=yes,C!=no\"");
  };
  auto add_out = [&](CLI::App* sub) {
    sub->add_option("--out", cmd.out, "Write the report to this file instead of stdout");
    sub->add_flag("--stats", cmd.stats, "Print propagation counters to stderr");
  };

  auto* infer = app.add_subcommand("infer", "Posterior marginals p(A | e)");
  add_net(infer, true);
  add_evidence(infer);
  infer->add_option("--target", cmd.target, "Variables or VAR=state, comma-separated");
  add_out(infer);

  auto* sens_out = app.add_subcommand("sens-out", "Sensitivity functions of one output in all parameters");
  add_net(sens_out, true);
  add_evidence(sens_out);
  sens_out->add_option("--target", cmd.target, "Output as VAR=state (bare VAR: every state)")
      ->required();
  sens_out->add_option("--method", cmd.method, "1 (default), 2, or both");
  add_out(sens_out);

  auto* sens_param = app.add_subcommand("sens-param", "Sensitivity functions of all outputs in one parameter");
  add_net(sens_param, true);
  add_evidence(sens_param);
  sens_param->add_option("--param", cmd.param, "Parameter, e.g. \"B|A=yes:yes\"")->required();
  sens_param->add_option("--target", cmd.target, "Outputs, comma-separated (default: all)");
  add_out(sens_param);

  auto* sens_n = app.add_subcommand("sens-n", "n-way multilinear coefficients of p(e)");
  add_net(sens_n, true);
  add_evidence(sens_n);
  sens_n->add_option("--params", cmd.params, "Parameters, comma-separated")->required();
  sens_n->add_option("--method", cmd.method, "auto (default), same-clique, or general");
  add_out(sens_n);

  auto* check = app.add_subcommand("check", "Compare the engine with brute-force enumeration");
  add_net(check, false);
  check->add_option("--trials", cmd.trials, "Number of random queries")->check(CLI::PositiveNumber);
  add_out(check);

  auto* stats = app.add_subcommand("stats", "Compile, propagate once and print counters");
  add_net(stats, true);
  add_evidence(stats);
  add_out(stats);

  auto* dump = app.add_subcommand("dump-jtree", "Print the junction tree as JSON");
  add_net(dump, true);
  add_out(dump);

  // argv[0] is the program name.
  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    cmd.kind = CommandKind::help;
    cmd.help_text = app.help();
    for (CLI::App* sub : app.get_subcommands()) cmd.help_text = sub->help();
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (infer->parsed()) cmd.kind = CommandKind::infer;
  if (sens_out->parsed()) cmd.kind = CommandKind::sens_out;
  if (sens_param->parsed()) cmd.kind = CommandKind::sens_param;
  if (sens_n->parsed()) cmd.kind = CommandKind::sens_n;
  if (check->parsed()) cmd.kind = CommandKind::check;
  if (stats->parsed()) cmd.kind = CommandKind::stats;
  if (dump->parsed()) cmd.kind = CommandKind::dump_jtree;
  return cmd;
}

int run(const Command& command, std::ostream& out, std::ostream& err) {
  if (command.kind == CommandKind::help) {
    out << command.help_text;
    return kExitOk;
  }
  std::ostringstream report;
  try {
    dispatch(command, report, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NetworkError& e) {
    err << "invalid network: " << e.what() << '\n';
    return kExitNetwork;
  } catch (const ImpossibleEvidence& e) {
    err << "impossible evidence: " << e.what() << '\n';
    return kExitImpossibleEvidence;
  } catch (const Error& e) {
    err << "analysis error: " << e.what() << '\n';
    return kExitAnalysis;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysis;
  }

  if (command.out.empty()) {
    out << report.str();
    return out ? kExitOk : kExitIo;
  }
  std::ofstream file(command.out, std::ios::binary);
  file << report.str();
  file.close();
  if (!file) {
    err << "cannot write '" << command.out << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse_args(argv);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\nrun with --help for usage\n";
    return kExitUsage;
  }
  return run(cmd, out, err);
}

}  // namespace bnsense::cli
