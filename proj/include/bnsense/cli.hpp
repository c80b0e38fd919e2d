#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bnsense::cli {

enum class CommandKind { help, infer, sens_out, sens_param, sens_n, check, stats, dump_jtree };

struct Command {
  CommandKind kind = CommandKind::help;
  std::string help_text;
  std::string net;
  std::string evidence;
  std::string target;   // "A", "A=yes", or a comma-separated list for sens-param
  std::string method;   // sens-out: 1 | 2 | both; sens-n: auto | same-clique | general
  std::string param;    // sens-param
  std::string params;   // sens-n
  std::string out;      // empty: standard output
  std::size_t trials = 50;
  bool stats = false;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNetwork = 2;
inline constexpr int kExitImpossibleEvidence = 3;
inline constexpr int kExitAnalysis = 4;
inline constexpr int kExitIo = 5;

// Throws UsageError on unknown flags or missing required options.
Command parse_args(const std::vector<std::string>& argv);

// Runs the command; reports go to `out` (or the --out file), diagnostics
// and --stats lines to `err`. Never throws.
int run(const Command& command, std::ostream& out, std::ostream& err);

// parse_args + run with usage errors mapped to exit code 1.
int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace bnsense::cli
