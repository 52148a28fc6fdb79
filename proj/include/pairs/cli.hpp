#pragma once

#include "pairs/backtest.hpp"
#include "pairs/ingest.hpp"
#include "pairs/synthetic.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pairs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

/// Effective configuration of one invocation after merging defaults, the
/// config file and command-line flags (flags win).
struct RunConfig {
    std::string command;  // backtest | montecarlo | verify-lemma
    std::filesystem::path input;
    std::filesystem::path out_dir = ".";
    BacktestConfig backtest;
    OUPairSpec ou;
    TheoremConfig theorem;
    std::size_t lemma_samples = 10000;
    std::vector<AdjustmentRule> adjustments;
    bool emit_ledger = true;
    bool emit_report = true;
    bool emit_plot = true;
    /// Canonical key -> value text actually used, echoed into every JSON output.
    std::map<std::string, std::string> echo;
};

/// Reads `key = value` lines; `#` starts a comment, blank lines are ignored.
/// Keys are normalized ('.' and '_' become '-'). FormatError on a line
/// without '='.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::istream& in);

/// Parses argv-style arguments (without the program name) into a RunConfig.
/// Throws ConfigError naming the offending flag or key; prints help and
/// returns nullopt-equivalent via `help_requested`.
RunConfig parse_run_config(const std::vector<std::string>& args, bool& help_requested, std::ostream& help_out);

std::string backtest_report_json(const BacktestReport& report, const RunConfig& config);
std::string theorem_json(const TheoremSummary& summary, const RunConfig& config);
std::string lemma_json(const LemmaSummary& summary, const RunConfig& config);

/// Entry point used by the `pairs` binary. Exit codes: 0 success, 1 invalid
/// flags/config/input, 2 failure while computing or writing outputs.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pairs::cli
