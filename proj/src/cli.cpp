#include "zenolab/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

namespace zenolab::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

const std::vector<std::string>& parameter_keys() {
  static const std::vector<std::string> keys{"grid-points", "x-min", "x-max", "sigma", "center", "time", "N", "omega",
                                             "tolerance-invariance", "tolerance-falsify", "seed"};
  return keys;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool is_parameter_key(const std::string& key) {
  const auto& keys = parameter_keys();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw UsageError(fmt::format("--{}: expected a finite real number, got '{}'", key, text));
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw UsageError(fmt::format("--{}: expected a non-negative integer, got '{}'", key, text));
  }
  return v;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "bundle") return OutputFormat::Bundle;
  if (text == "both") return OutputFormat::Both;
  throw UsageError(fmt::format("--format: expected csv, bundle or both, got '{}'", text));
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

Json json_numbers(std::span<const double> values) {
  Json arr = Json::array();
  for (double v : values) arr.push_back(json_number(v));
  return arr;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["condition"] = r.condition;
  j["verdict"] = to_string(r.verdict);
  j["tolerance"] = json_number(r.tolerance);
  j["max_residual"] = json_number(r.max_residual);
  j["max_forward_residual"] = json_number(r.max_forward_residual);
  j["max_backward_residual"] = json_number(r.max_backward_residual);
  if (r.witness) {
    j["witness"] = {{"t", json_number(r.witness->t)},
                    {"state_index", r.witness->state_index},
                    {"residual", json_number(r.witness->residual)}};
  } else {
    j["witness"] = nullptr;
  }
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back(Json::array({json_number(s.t), s.state_index, json_number(s.residual)}));
  j["samples"] = std::move(samples);
  return j;
}

Json to_json(const SurvivalReport& r) {
  Json j;
  j["final_time"] = json_number(r.final_time);
  j["n_measurements"] = r.n_measurements;
  j["s_free"] = json_number(r.s_free);
  j["s_measured"] = json_number(r.s_measured);
  j["abs_ds"] = json_number(std::abs(r.s_measured - r.s_free));
  j["leakage_free"] = json_number(r.leakage_free);
  j["retained_norms"] = json_numbers(r.retained_norms);
  return j;
}

Json to_json(const AnalyticityReport& r) {
  Json j;
  j["grid_tag"] = r.grid_tag;
  j["spectral_ceiling"] = json_number(r.spectral_ceiling);
  j["classification"] = to_string(r.classification);
  j["ceiling_index"] = r.ceiling_index;
  j["radius_trend"] = json_number(r.radius_trend);
  j["plateau"] = json_number(r.plateau);
  j["log_norms"] = json_numbers(r.log_norms);
  j["growth_rates"] = json_numbers(r.growth_rates);
  j["radius_estimates"] = json_numbers(r.radius_estimates);
  return j;
}

std::string render_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else {
          return v;
        }
      },
      c);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError(fmt::format("cannot open '{}' for writing", path.string()));
  f << content;
  f.close();
  if (!f) throw UsageError(fmt::format("failed writing '{}'", path.string()));
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw UsageError(fmt::format("{}:{}: expected 'key = value', got '{}'", origin, line_no, body));
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "n") key = "N";
    if (!is_parameter_key(key)) throw UsageError(fmt::format("{}:{}: unknown key '{}'", origin, line_no, key));
    if (value.empty()) throw UsageError(fmt::format("{}:{}: empty value for '{}'", origin, line_no, key));
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  return parse_config_text(read_file(path), path.string());
}

ScenarioParams to_params(const ScenarioInfo& scenario, const std::map<std::string, std::string>& overrides) {
  ScenarioParams p;
  for (const auto& [key, value] : overrides) {
    if (std::find(scenario.parameters.begin(), scenario.parameters.end(), key) == scenario.parameters.end()) {
      throw UsageError(fmt::format("scenario '{}' does not accept --{}", scenario.name, key));
    }
    if (key == "grid-points") {
      p.grid_points = parse_count(key, value);
    } else if (key == "x-min") {
      p.x_min = parse_real(key, value);
    } else if (key == "x-max") {
      p.x_max = parse_real(key, value);
    } else if (key == "sigma") {
      p.sigma = parse_real(key, value);
    } else if (key == "center") {
      p.center = parse_real(key, value);
    } else if (key == "time") {
      p.time = parse_real(key, value);
    } else if (key == "N") {
      p.n_measurements = parse_count(key, value);
    } else if (key == "omega") {
      p.omega = parse_real(key, value);
    } else if (key == "tolerance-invariance") {
      p.tolerance_invariance = parse_real(key, value);
    } else if (key == "tolerance-falsify") {
      p.tolerance_falsify = parse_real(key, value);
    } else if (key == "seed") {
      p.seed = parse_count(key, value);
    } else {
      throw UsageError(fmt::format("unknown parameter '{}'", key));
    }
  }
  return p;
}

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::string render_summary(const VerdictBundle& b) {
  std::string s = fmt::format("scenario: {}\n", b.scenario);
  for (const auto& line : b.headlines) s += fmt::format("  {}\n", line);
  s += "checks:\n";
  std::size_t passed = 0;
  for (const auto& f : b.flags) {
    passed += f.passed ? 1 : 0;
    s += fmt::format("  {} {} = {:.6g} (required {} {:.6g})\n", f.passed ? "PASS" : "FAIL", f.name, f.value,
                     to_string(f.relation), f.threshold);
  }
  s += fmt::format("result: {} ({}/{} checks)\n", b.all_passed() ? "PASS" : "FAIL", passed, b.flags.size());
  return s;
}

std::string render_bundle_json(const VerdictBundle& b) {
  Json j;
  j["scenario"] = b.scenario;
  j["all_passed"] = b.all_passed();
  Json prov = Json::object();
  for (const auto& [k, v] : b.provenance) prov[k] = v;
  j["provenance"] = std::move(prov);
  Json flags = Json::array();
  for (const auto& f : b.flags) {
    flags.push_back({{"name", f.name},
                     {"value", json_number(f.value)},
                     {"relation", to_string(f.relation)},
                     {"threshold", json_number(f.threshold)},
                     {"passed", f.passed}});
  }
  j["flags"] = std::move(flags);
  j["headlines"] = b.headlines;
  Json conditions = Json::array();
  for (const auto& c : b.conditions) conditions.push_back({{"label", c.label}, {"report", to_json(c.report)}});
  j["conditions"] = std::move(conditions);
  Json survivals = Json::array();
  for (const auto& s : b.survivals) survivals.push_back({{"label", s.label}, {"report", to_json(s.report)}});
  j["survivals"] = std::move(survivals);
  Json analyticity = Json::array();
  for (const auto& a : b.analyticity) analyticity.push_back({{"label", a.label}, {"report", to_json(a.report)}});
  j["analyticity"] = std::move(analyticity);
  Json curves = Json::array();
  for (const auto& c : b.curves) {
    Json rows = Json::array();
    for (const auto& row : c.rows) {
      Json r = Json::array();
      for (const auto& cell : row) {
        std::visit(
            [&r](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                r.push_back(json_number(v));
              } else {
                r.push_back(v);
              }
            },
            cell);
      }
      rows.push_back(std::move(r));
    }
    curves.push_back({{"name", c.name}, {"columns", c.columns}, {"rows", std::move(rows)}});
  }
  j["curves"] = std::move(curves);
  return j.dump(2) + "\n";
}

std::string render_csv(const CurveTable& table) {
  std::string s = "# ";
  for (std::size_t i = 0; i < table.columns.size(); ++i) s += (i ? "," : "") + table.columns[i];
  s += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + render_cell(row[i]);
    s += "\n";
  }
  return s;
}

void write_outputs(const VerdictBundle& bundle, const fs::path& dir, OutputFormat format) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw UsageError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
  }
  write_file(dir / "summary.txt", render_summary(bundle));
  if (format != OutputFormat::Csv) write_file(dir / "bundle.json", render_bundle_json(bundle));
  if (format != OutputFormat::Bundle) {
    for (const auto& c : bundle.curves) write_file(dir / (c.name + ".csv"), render_csv(c));
  }
}

namespace {

struct CommonOptions {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string out;
  std::string format = "both";
  std::string config;

  void attach(CLI::App* cmd) {
    for (const auto& key : parameter_keys()) options[key] = cmd->add_option("--" + key, values[key], "override " + key);
    cmd->add_option("--out", out, "output directory (default $ZENOLAB_OUT, else ./zenolab-out)");
    cmd->add_option("--format", format, "csv, bundle or both")->capture_default_str();
    cmd->add_option("--config", config, "key = value parameter file; flags override it");
  }

  std::map<std::string, std::string> overrides() const {
    std::map<std::string, std::string> merged;
    if (!config.empty()) merged = read_config_file(config);
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) merged[key] = values.at(key);
    }
    return merged;
  }

  fs::path out_dir() const {
    if (!out.empty()) return out;
    if (const char* env = std::getenv("ZENOLAB_OUT"); env != nullptr && *env != '\0') return env;
    return "zenolab-out";
  }
};

const ScenarioInfo& require_scenario(const std::string& name) {
  const ScenarioInfo* s = find_scenario(name);
  if (s == nullptr) {
    std::string known;
    for (const auto& info : scenario_registry()) known += (known.empty() ? "" : ", ") + info.name;
    throw UsageError(fmt::format("unknown scenario '{}' (known: {})", name, known));
  }
  return *s;
}

/// Runs one scenario and writes its outputs; returns the bundle.
VerdictBundle execute(const ScenarioInfo& scenario, const std::map<std::string, std::string>& overrides,
                      const fs::path& dir, OutputFormat format) {
  const ScenarioParams params = to_params(scenario, overrides);
  VerdictBundle bundle;
  try {
    bundle = scenario.run(params);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(fmt::format("scenario '{}' rejected its configuration: {}", scenario.name, e.what()));
  }
  write_outputs(bundle, dir, format);
  return bundle;
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw UsageError(fmt::format("--values: empty entry in '{}'", text));
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("--values: no values given");
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of invariant-subspace conditions behind the measurement Zeno effect", "zenolab"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "list the scenarios and the parameters each accepts");

  auto* run_cmd = app.add_subcommand("run", "run one scenario");
  std::string run_name;
  std::string golden;
  CommonOptions run_opts;
  run_cmd->add_option("scenario", run_name, "scenario name")->required();
  run_opts.attach(run_cmd);
  run_cmd->add_option("--golden", golden, "compare bundle.json with this file byte for byte");

  auto* sweep_cmd = app.add_subcommand("sweep", "run one scenario over a list of values of one parameter");
  std::string sweep_name;
  std::string sweep_param;
  std::string sweep_values;
  std::size_t jobs = 1;
  CommonOptions sweep_opts;
  sweep_cmd->add_option("scenario", sweep_name, "scenario name")->required();
  sweep_cmd->add_option("--param", sweep_param, "parameter to vary")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep_cmd->add_option("--jobs", jobs, "parallel runs")->capture_default_str();
  sweep_opts.attach(sweep_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& s : scenario_registry()) {
        out << fmt::format("{}\n  {}\n  parameters:", s.name, s.summary);
        for (const auto& p : s.parameters) out << " --" << p;
        out << "\n";
      }
      return kExitPass;
    }

    if (run_cmd->parsed()) {
      const ScenarioInfo& scenario = require_scenario(run_name);
      const OutputFormat format = parse_format(run_opts.format);
      if (!golden.empty() && format == OutputFormat::Csv) throw UsageError("--golden needs --format bundle or both");
      const fs::path dir = run_opts.out_dir();
      const VerdictBundle bundle = execute(scenario, run_opts.overrides(), dir, format);
      out << render_summary(bundle);
      out << fmt::format("outputs written to {}\n", dir.string());
      int status = bundle.all_passed() ? kExitPass : kExitFail;
      if (!golden.empty()) {
        const std::string expected = read_file(golden);
        if (expected != render_bundle_json(bundle)) {
          err << fmt::format("golden mismatch: {} differs from {}\n", (dir / "bundle.json").string(), golden);
          status = kExitFail;
        } else {
          out << fmt::format("golden match: {}\n", golden);
        }
      }
      return status;
    }

    if (sweep_cmd->parsed()) {
      const ScenarioInfo& scenario = require_scenario(sweep_name);
      const OutputFormat format = parse_format(sweep_opts.format);
      std::string param = sweep_param;
      std::replace(param.begin(), param.end(), '_', '-');
      if (!is_parameter_key(param)) throw UsageError(fmt::format("--param: unknown parameter '{}'", sweep_param));
      if (jobs < 1) throw UsageError("--jobs must be at least 1");
      const auto values = split_values(sweep_values);
      const auto base = sweep_opts.overrides();
      const fs::path root = sweep_opts.out_dir();

      // Validate every point before launching any work.
      std::vector<std::map<std::string, std::string>> points;
      for (const auto& v : values) {
        auto o = base;
        o[param] = v;
        (void)to_params(scenario, o);
        points.push_back(std::move(o));
      }

      std::vector<std::string> summaries(points.size());
      std::vector<int> statuses(points.size(), kExitPass);
      std::vector<std::string> errors(points.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            const auto bundle = execute(scenario, points[i], root / (param + "-" + values[i]), format);
            summaries[i] = render_summary(bundle);
            statuses[i] = bundle.all_passed() ? kExitPass : kExitFail;
          } catch (const std::exception& e) {
            errors[i] = e.what();
            statuses[i] = kExitUsage;
          }
        }
      };
      std::vector<std::thread> pool;
      const std::size_t n_threads = std::min(jobs, points.size());
      for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();

      int status = kExitPass;
      for (std::size_t i = 0; i < points.size(); ++i) {
        out << fmt::format("== {} = {} ({})\n", param, values[i], (root / (param + "-" + values[i])).string());
        if (!errors[i].empty()) {
          err << fmt::format("error: {} = {}: {}\n", param, values[i], errors[i]);
        } else {
          out << summaries[i];
        }
        status = std::max(status, statuses[i]);
      }
      return status;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace zenolab::cli
