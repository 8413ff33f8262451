#pragma once

// Command-line front end: `run <scenario>`, `list`, `sweep <scenario>`.
// Exit status: 0 all pass flags true, 1 a scientific check failed, 2 usage,
// configuration or I/O error.

#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "zenolab/scenarios.hpp"

namespace zenolab::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Raised for unknown keys, malformed values and unreadable or unwritable paths.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every parameter key a scenario may accept, in CLI long-flag spelling.
const std::vector<std::string>& parameter_keys();

/// Flat `key = value` lines with `#` comments. Underscores in keys are read
/// as dashes. Throws UsageError on malformed lines or unknown keys.
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Type-checks the overrides against the scenario's schema.
ScenarioParams to_params(const ScenarioInfo& scenario, const std::map<std::string, std::string>& overrides);

/// 17 significant digits, shortest form for integral values ("0", "1", "5").
std::string format_number(double v);

std::string render_summary(const VerdictBundle& bundle);
std::string render_bundle_json(const VerdictBundle& bundle);
std::string render_csv(const CurveTable& table);

enum class OutputFormat { Csv, Bundle, Both };

/// Writes summary.txt plus the requested bundle.json and curve CSVs into dir.
void write_outputs(const VerdictBundle& bundle, const std::filesystem::path& dir, OutputFormat format);

/// Full command line, argv[0] excluded.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zenolab::cli
