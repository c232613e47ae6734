#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "coverage/config.hpp"
#include "coverage/svg.hpp"
#include "coverage/trajectory_io.hpp"
#include "coverage/verify.hpp"

namespace coverage::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string config_path;
  std::string log_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::string format = "csv";
  std::optional<std::vector<double>> times;
};

// Input problems that are not config schema errors (missing files, bad logs).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("coverage");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("COVERAGE_LOG_LEVEL")) {
    const std::string level = env;
    if (level == "error") spdlog::set_level(spdlog::level::err);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else if (level != "info") spdlog::warn("ignoring COVERAGE_LOG_LEVEL={}", level);
  }
}

ScenarioConfig load(const Options& opt) {
  if (opt.config_path.empty()) throw InputError("--config is required");
  ScenarioConfig c = load_config(opt.config_path);
  if (opt.seed) {
    c.seed = *opt.seed;
    if (c.search) c.search->rng_seed = *opt.seed;
  }
  if (opt.dt) c.dt = *opt.dt;
  validate(c);
  return c;
}

fs::path prepare_out(const Options& opt) {
  fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_snapshots(const fs::path& dir, const ScenarioConfig& config, TrajectoryLog log,
                     const std::vector<double>& times, const Domain& domain) {
  const std::vector<std::size_t> picked = select_snapshots(log, times);
  if (picked.empty()) return;
  if (log.records.front().centroids.empty()) {
    complete_records(log, CoupledSystem(domain, config.cost, config.kappa_phi, config.kappa_p));
  }
  for (std::size_t k = 0; k < picked.size(); ++k) {
    const fs::path file = dir / snapshot_name(times[k]);
    write_text_file(file.string(), render_snapshot(domain.region(), log.records[picked[k]]));
    spdlog::debug("wrote {}", file.string());
  }
}

int cmd_run(const Options& opt) {
  const ScenarioConfig config = load(opt);
  const fs::path dir = prepare_out(opt);
  write_text_file((dir / "config.json").string(), config_to_json(config).dump(2) + "\n");

  const Domain domain = config.domain();
  spdlog::info("running {} agents to t={} with dt={}", config.agent_count, config.t_end,
               config.dt);
  TrajectoryLog log;
  try {
    log = run_scenario(config, domain);
  } catch (const ScenarioError& e) {
    write_text_file((dir / "trajectory.csv").string(), trajectory_csv(e.partial()));
    spdlog::error("{}", e.what());
    return kRuntimeFailure;
  }
  write_text_file((dir / "trajectory.csv").string(), trajectory_csv(log));
  write_snapshots(dir, config, log, config.snapshot_times, domain);

  const TrajectoryRecord& last = log.records.back();
  spdlog::info("t={} V={:.6e} J={:.9g} H={:.6e}", last.t, last.V, last.J, last.H);
  return kOk;
}

int cmd_search(const Options& opt) {
  const ScenarioConfig config = load(opt);
  if (!config.search) throw ConfigError("search", "missing section");
  const fs::path dir = prepare_out(opt);
  write_text_file((dir / "config.json").string(), config_to_json(config).dump(2) + "\n");

  const Domain domain = config.domain();
  const CoupledState initial = initial_state(config, domain);
  const EpochParams params{config.kappa_phi, config.kappa_p, config.dt};
  spdlog::info("search with K*={} and T_eps={}", config.search->resolved_k_star(),
               config.search->t_epsilon);
  SearchResult result;
  try {
    result = run_search(domain, config.cost, initial, *config.search, params);
  } catch (const SearchError& e) {
    std::ostringstream csv;
    write_epoch_csv(csv, e.completed());
    write_text_file((dir / "epochs.csv").string(), csv.str());
    spdlog::error("{}", e.what());
    return kRuntimeFailure;
  }
  std::ostringstream csv;
  write_epoch_csv(csv, result.epochs);
  write_text_file((dir / "epochs.csv").string(), csv.str());
  write_text_file((dir / "final_configuration.json").string(),
                  final_configuration_json(result).dump(2) + "\n");

  char line[128];
  std::snprintf(line, sizeof line, "k* = %d\nJ^{k*} = %.17g\n", result.final.k_star_index + 1,
                result.final.stored_cost);
  std::cout << line;
  return kOk;
}

int cmd_verify(const Options& opt) {
  const ScenarioConfig config = load(opt);
  const fs::path dir = prepare_out(opt);
  const Domain domain = config.domain();

  TrajectoryLog log;
  if (!opt.log_path.empty()) {
    try {
      log = load_trajectory_csv(opt.log_path);
    } catch (const LogFormatError& e) {
      throw InputError(std::string("unreadable log: ") + e.what());
    }
    if (log.agent_count != config.agent_count) {
      throw InputError("log has " + std::to_string(log.agent_count) + " agents, config has " +
                       std::to_string(config.agent_count));
    }
    complete_records(log, CoupledSystem(domain, config.cost, config.kappa_phi, config.kappa_p));
  } else {
    try {
      log = run_scenario(config, domain);
    } catch (const ScenarioError& e) {
      spdlog::error("{}", e.what());
      return kRuntimeFailure;
    }
  }

  const VerificationReport report = verify_invariants(log, config, domain);
  const std::string text = report.to_text();
  write_text_file((dir / "report.txt").string(), text);
  std::cout << text;
  const bool ok = report.all_passed();
  spdlog::info("verification {}", ok ? "passed" : "failed");
  return ok ? kOk : kVerificationFailed;
}

int cmd_export(const Options& opt) {
  if (opt.log_path.empty()) throw InputError("--log is required");
  TrajectoryLog log;
  try {
    log = load_trajectory_csv(opt.log_path);
  } catch (const LogFormatError& e) {
    throw InputError(std::string("malformed log: ") + e.what());
  }
  const fs::path dir = prepare_out(opt);
  if (opt.format == "csv") {
    write_text_file((dir / "trajectory.csv").string(), trajectory_csv(log));
    return kOk;
  }
  const ScenarioConfig config = load(opt);
  if (log.agent_count != config.agent_count) {
    throw InputError("log and config disagree on the number of agents");
  }
  const std::vector<double> times = opt.times ? *opt.times : config.snapshot_times;
  write_snapshots(dir, config, std::move(log), times, config.domain());
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  if (!spdlog::get("coverage")) configure_logging();

  CLI::App app{"Coverage control with load balancing on annular regions"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "scenario JSON file");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--seed", opt.seed, "overrides the config seed");
    sub->add_option("--dt", opt.dt, "overrides the integrator step")->check(CLI::PositiveNumber);
  };
  CLI::App* run_cmd = app.add_subcommand("run", "simulate a scenario and write its artifacts");
  CLI::App* search_cmd = app.add_subcommand("search", "run the circular search over bar anchors");
  CLI::App* verify_cmd = app.add_subcommand("verify", "check a log (or a fresh run) for invariants");
  CLI::App* export_cmd = app.add_subcommand("export", "re-render artifacts from a stored log");
  for (CLI::App* sub : {run_cmd, search_cmd, verify_cmd, export_cmd}) common(sub);
  verify_cmd->add_option("--log", opt.log_path, "trajectory CSV to verify");
  export_cmd->add_option("--log", opt.log_path, "trajectory CSV to export")->required();
  export_cmd->add_option("--format", opt.format, "csv or svg-snapshots")
      ->check(CLI::IsMember({"csv", "svg-snapshots"}));
  export_cmd->add_option("--times", opt.times, "snapshot times (default: config output list)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run_cmd) return cmd_run(opt);
    if (*search_cmd) return cmd_search(opt);
    if (*verify_cmd) return cmd_verify(opt);
    return cmd_export(opt);
  } catch (const ConfigError& e) {
    spdlog::error("invalid config: {}", e.what());
  } catch (const InputError& e) {
    spdlog::error("{}", e.what());
  } catch (const SnapshotRangeError& e) {
    spdlog::error("{}", e.what());
  } catch (const std::exception& e) {
    spdlog::error("runtime failure: {}", e.what());
    return kRuntimeFailure;
  }
  return kInputError;
}

}  // namespace coverage::cli
