#include "rankproc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rankproc/analysis.hpp"
#include "rankproc/config.hpp"
#include "rankproc/errors.hpp"
#include "rankproc/simulate.hpp"
#include "rankproc/stats.hpp"

namespace rankproc::cli {

namespace {

using io::Json;

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << Json{{"code", code}, {"message", message}}.dump() << '\n';
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("OUTPUT_UNWRITABLE", "cannot write " + path);
  file << text;
  if (!file) throw ConfigError("OUTPUT_UNWRITABLE", "failed writing " + path);
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pass_fail_table(const LimitLawReport& report, const VerifyOptions& options) {
  std::ostringstream os;
  auto row = [&os](const std::string& check, const std::string& value, const std::string& bound,
                   bool pass) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-34s %-12s %-12s %s\n", check.c_str(), value.c_str(),
                  bound.c_str(), pass ? "PASS" : "FAIL");
    os << buf;
  };
  char header[256];
  std::snprintf(header, sizeof header, "%-34s %-12s %-12s %s\n", "check", "value", "bound",
                "result");
  os << header;
  row("undetermined fraction", fixed(report.undetermined_fraction), "<= 0.0100",
      report.undetermined_fraction <= 0.01);
  row("settled at non-terminal ranking", std::to_string(report.anomalies.size()), "0",
      report.anomalies.empty());
  for (const auto& s : report.slln) {
    if (s.runs < options.slln_min_runs) continue;
    row("mean " + s.ranking.to_string() + " (" + std::to_string(s.runs) + " runs)",
        fixed(s.max_error), "<= " + fixed(options.slln_tolerance),
        s.max_error <= options.slln_tolerance);
  }
  for (const auto& k : report.ks) {
    row("KS " + k.ranking.to_string() + " x" + std::to_string(k.component + 1) + " (" +
            std::to_string(k.runs) + " runs)",
        fixed(k.statistic), "<= " + fixed(k.critical), k.pass);
  }
  return os.str();
}

int cmd_enumerate(int d, std::ostream& out) {
  const auto rankings = enumerate_rankings(d);
  Json list = Json::array();
  for (const auto& r : rankings) list.push_back(io::to_json(r));
  out << Json{{"schema_version", io::kSchemaVersion},
              {"kind", "rankings"},
              {"d", d},
              {"count", rankings.size()},
              {"rankings", std::move(list)}}
             .dump(2)
      << '\n';
  return kExitOk;
}

int cmd_analyze(const std::string& config, const std::string& out_path, std::ostream& out) {
  const auto spec = io::load_process_config(config);
  const auto report = analyze(spec);
  emit(io::to_json(report, spec).dump(2) + "\n", out_path, out);
  return kExitOk;
}

struct SimulateArgs {
  std::string config;
  std::int64_t runs = 1000;
  std::int64_t horizon = 1000;
  std::int64_t window = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out;
  std::string format = "json";
  bool trace = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto spec = io::load_process_config(a.config);
  if (a.runs < 1) throw InputError("--runs must be positive");
  if (a.horizon < 1) throw InputError("--horizon must be positive");
  EnsembleRequest request;
  request.runs = a.runs;
  request.horizon = a.horizon;
  request.window = a.window > 0 ? a.window : default_window(a.horizon);
  request.master_seed = a.seed;
  request.workers = a.workers;
  request.trace = a.trace;
  const auto summary = ensemble(spec, request);
  emit(a.format == "csv" ? io::to_csv(summary) : io::to_json(summary).dump(2) + "\n", a.out, out);
  return kExitOk;
}

int cmd_verify(const std::string& config, const std::string& ensemble_path,
               const std::string& out_path, const VerifyOptions& options, std::ostream& out,
               std::ostream& err) {
  const auto spec = io::load_process_config(config);
  const auto summary = io::ensemble_from_json(io::read_json_file(ensemble_path));
  if (summary.spec_digest != spec_digest(spec)) {
    throw ConfigError("ENSEMBLE_MISMATCH", "ensemble was produced from a different process");
  }
  for (const auto& run : summary.runs) {
    if (run.final_state.size() != static_cast<std::size_t>(spec.dimension())) {
      throw ConfigError("ENSEMBLE_MISMATCH", "ensemble state dimension differs from the config");
    }
  }
  const auto terminal = terminal_rankings(spec);
  const auto report = verify_limit_laws(summary, spec, terminal, options);
  auto json = io::to_json(report);
  json["spec_digest"] = summary.spec_digest;
  json["horizon"] = summary.horizon;
  json["window"] = summary.window;
  json["slln_tolerance"] = options.slln_tolerance;
  const auto table = pass_fail_table(report, options);
  if (out_path.empty()) {
    out << json.dump(2) << '\n';
    err << table;
  } else {
    emit(json.dump(2) + "\n", out_path, out);
    out << table;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ranking-based reinforcement processes: enumeration, analysis, simulation"};
  app.name("rankproc");
  app.require_subcommand(1);

  int d = 0;
  auto* enumerate = app.add_subcommand("enumerate", "List all rankings of d items");
  enumerate->add_option("--d", d, "Number of items")->required()->check(CLI::Range(1, 6));

  std::string analyze_config, analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "Classify a process and print a JSON report");
  analyze_cmd->add_option("--config", analyze_config, "Process config")->required();
  analyze_cmd->add_option("--out", analyze_out, "Write the report here instead of stdout");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate an ensemble of runs");
  simulate->add_option("--config", sim.config, "Process config")->required();
  simulate->add_option("--runs", sim.runs, "Number of runs M")->capture_default_str();
  simulate->add_option("--horizon", sim.horizon, "Steps per run N")->capture_default_str();
  simulate->add_option("--window", sim.window, "Settling window W (default N/10)");
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--workers", sim.workers, "Worker threads, 0 = all cores")
      ->capture_default_str();
  simulate->add_option("--out", sim.out, "Output file (default stdout)");
  simulate->add_option("--format", sim.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  simulate->add_flag("--trace", sim.trace, "Record ranking change points");

  std::string verify_config, verify_ensemble, verify_out;
  VerifyOptions verify_options;
  auto* verify = app.add_subcommand("verify", "Check an ensemble against the limit laws");
  verify->add_option("--config", verify_config, "Process config")->required();
  verify->add_option("--ensemble", verify_ensemble, "Ensemble JSON from simulate")->required();
  verify->add_option("--out", verify_out, "Write the JSON report here; the table goes to stdout");
  verify->add_option("--tolerance", verify_options.slln_tolerance, "Mean error budget")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "USAGE", e.what());
    err << app.help();
    return kExitValidation;
  }

  try {
    if (*enumerate) return cmd_enumerate(d, out);
    if (*analyze_cmd) return cmd_analyze(analyze_config, analyze_out, out);
    if (*simulate) return cmd_simulate(sim, out);
    if (*verify) {
      return cmd_verify(verify_config, verify_ensemble, verify_out, verify_options, out, err);
    }
  } catch (const Error& e) {
    report_error(err, e.code(), e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    report_error(err, "INTERNAL", e.what());
    return kExitInternal;
  }
  report_error(err, "USAGE", "no subcommand");
  return kExitValidation;
}

}  // namespace rankproc::cli
