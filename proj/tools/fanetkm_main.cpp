#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fanetkm/cli/config.hpp"
#include "fanetkm/cli/figures.hpp"
#include "fanetkm/cli/output.hpp"
#include "fanetkm/errors.hpp"
#include "fanetkm/selftest.hpp"
#include "fanetkm/simd/kernels.hpp"

namespace {

using namespace fanetkm;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigInvalid = 2,
  kConfigSyntax = 3,
  kConfigMissing = 4,
  kConfigUnknownField = 5,
  kSimulation = 6,
  kIo = 7,
  kSelftestFailed = 8,
};

struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;
  std::string out = "-";
  std::string format = "csv";
  std::optional<std::size_t> metrics_stride;
  std::size_t threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seed", o.seed, "First seed (alone: run exactly this seed)");
  cmd->add_option("--seeds", o.seeds, "Number of seeds: seed, seed+1, ... (default first seed 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output path, '-' for stdout")->capture_default_str();
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--metrics-stride", o.metrics_stride,
                  "Compute key-path metrics every K snapshots")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "Parallel runs (0: FANETKM_THREADS or all cores)")
      ->capture_default_str();
}

std::optional<std::vector<std::uint64_t>> seed_list(const CommonOptions& o) {
  if (!o.seed && !o.seeds) return std::nullopt;
  const std::uint64_t first = o.seed.value_or(1);
  const std::size_t count = o.seeds.value_or(1);
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(first + i);
  return out;
}

cli::OutputFormat format_of(const CommonOptions& o) {
  return o.format == "json" ? cli::OutputFormat::Json : cli::OutputFormat::Csv;
}

engine::SweepOptions sweep_options(const CommonOptions& o) {
  engine::SweepOptions s;
  s.threads = o.threads;
  s.run.keep_neighbor_counts = false;
  return s;
}

void apply_common(engine::ScenarioConfig& cfg, const CommonOptions& o) {
  if (auto seeds = seed_list(o)) cfg.seeds = *seeds;
  if (o.metrics_stride) cfg.metrics_stride = *o.metrics_stride;
}

nlohmann::json read_overrides(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::MissingFile, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(ConfigErrorKind::MalformedSyntax, path + ": malformed JSON: " + e.what());
  }
}

int run_scenario(const engine::ScenarioConfig& parsed, const CommonOptions& o) {
  engine::ScenarioConfig cfg = parsed;
  apply_common(cfg, o);
  cfg.validate();
  engine::SweepSpec spec;
  spec.network_kind = cfg.network_kind;
  spec.area_lengths = {cfg.box.x_len};
  spec.base = cfg;
  // A single run is a one-length sweep over the configured box.
  std::vector<engine::RunResult> runs;
  {
    const auto result = engine::sweep(spec, sweep_options(o));
    for (const auto& r : result.rows) runs.push_back(r.result);
  }
  cli::emit_results(cli::rows_for_runs(cfg, runs), format_of(o), o.out);
  return kOk;
}

int run_sweep(engine::SweepSpec spec, const CommonOptions& o) {
  apply_common(spec.base, o);
  spec.validate();
  const auto result = engine::sweep(spec, sweep_options(o));
  cli::emit_results(cli::rows_for_sweep(spec, result), format_of(o), o.out);
  return kOk;
}

int config_exit(const ConfigError& e) {
  switch (e.kind()) {
    case ConfigErrorKind::MissingFile:
      return kConfigMissing;
    case ConfigErrorKind::MalformedSyntax:
      return kConfigSyntax;
    case ConfigErrorKind::UnknownField:
      return kConfigUnknownField;
    case ConfigErrorKind::InvalidValue:
      break;
  }
  return kConfigInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key-exchange simulator for flying and ground ad hoc networks"};
  app.require_subcommand(1);
  app.footer(cli::defaults_help() + R"(
Environment:
  FANETKM_THREADS   default number of parallel runs (default: hardware concurrency)
  FANETKM_SIMD      set to "scalar" to disable vector kernels

Exit codes:
  0 success, 1 usage, 2 invalid config value, 3 malformed config,
  4 missing config file, 5 unknown config field, 6 simulation error,
  7 I/O error, 8 self-test failure
)");

  CommonOptions common;
  std::string config_path;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario for each seed");
  run_cmd->add_option("config", config_path, "Scenario JSON")->required();
  add_common(run_cmd, common);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over its area_lengths");
  sweep_cmd->add_option("config", config_path, "Sweep JSON (area_lengths defaults to 500..1500)")
      ->required();
  add_common(sweep_cmd, common);

  int figure_number = 0;
  std::string overrides_path;
  auto* figure_cmd = app.add_subcommand("figure", "Emit the data series of one figure (2..8)");
  figure_cmd->add_option("number", figure_number, "Figure number")
      ->required()
      ->check(CLI::Range(2, 8));
  figure_cmd->add_option("--config", overrides_path, "JSON overrides applied to every series");
  add_common(figure_cmd, common);

  std::vector<double> density_lengths = {500.0};
  auto* density_cmd =
      app.add_subcommand("density-check", "Neighbor-count normality diagnostics");
  density_cmd->add_option("--area-length", density_lengths, "Area lengths in m")
      ->capture_default_str();
  density_cmd->add_option("--config", overrides_path, "JSON overrides applied to every series");
  add_common(density_cmd, common);

  std::size_t tamper_cases = 1000;
  std::uint64_t selftest_seed = 1;
  auto* selftest_cmd = app.add_subcommand("ecc-selftest", "Toy-curve ECC and signature suite");
  selftest_cmd->add_option("--tamper-cases", tamper_cases, "Tamper fuzz cases")
      ->capture_default_str();
  selftest_cmd->add_option("--seed", selftest_seed, "Fuzz seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run_cmd) {
      auto parsed = cli::parse_scenario(config_path);
      if (std::holds_alternative<engine::SweepSpec>(parsed)) {
        throw ConfigError(ConfigErrorKind::InvalidValue,
                          config_path + ": area_lengths: use 'sweep' for multi-length configs");
      }
      return run_scenario(std::get<engine::ScenarioConfig>(parsed), common);
    }
    if (*sweep_cmd) {
      auto parsed = cli::parse_scenario(config_path);
      engine::SweepSpec spec;
      if (auto* s = std::get_if<engine::SweepSpec>(&parsed)) {
        spec = *s;
      } else {
        spec.base = std::get<engine::ScenarioConfig>(parsed);
        spec.network_kind = spec.base.network_kind;
        spec.area_lengths = engine::default_area_lengths();
      }
      return run_sweep(std::move(spec), common);
    }
    if (*figure_cmd) {
      std::optional<nlohmann::json> overrides;
      if (!overrides_path.empty()) overrides = read_overrides(overrides_path);
      auto plan = cli::figure_plan(figure_number, overrides ? &*overrides : nullptr);
      cli::apply_run_options(plan, seed_list(common), common.metrics_stride);
      for (const auto& s : plan.series) s.spec.validate();
      cli::emit_results(cli::run_figure(plan, sweep_options(common)), format_of(common),
                        common.out);
      return kOk;
    }
    if (*density_cmd) {
      std::optional<nlohmann::json> overrides;
      if (!overrides_path.empty()) overrides = read_overrides(overrides_path);
      const auto seeds = seed_list(common).value_or(engine::default_scenario(engine::NetworkKind::Fanet).seeds);
      const auto rows = cli::density_check(density_lengths, seeds,
                                           overrides ? &*overrides : nullptr, sweep_options(common));
      cli::emit_results(cli::density_rows(rows), format_of(common), common.out);
      return kOk;
    }
    if (*selftest_cmd) {
      bool ok = true;
      for (const auto& c : selftest::ecc_selftest(tamper_cases, selftest_seed)) {
        std::printf("%s %s%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.empty() ? "" : ": ", c.detail.c_str());
        ok = ok && c.passed;
      }
      std::printf("kernels: %s\n", std::string(simd::isa_name(simd::active_kernels().isa)).c_str());
      return ok ? kOk : kSelftestFailed;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return config_exit(e);
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "simulation error: %s\n", e.what());
    return kSimulation;
  }
  return kUsage;
}
