#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fanetkm/engine.hpp"

namespace fanetkm::cli {

inline constexpr std::string_view kCsvHeader =
    "network_kind,mobility_model,area_length_m,comm_density_2d,comm_density_3d,metric,value,seed";

struct OutputRow {
  std::string network_kind;
  std::string mobility_model;
  double area_length_m = 0.0;
  double comm_density_2d = 0.0;
  double comm_density_3d = 0.0;
  std::string metric;
  std::optional<double> value;
  /// Seed as decimal text, or "mean".
  std::string seed;

  friend bool operator==(const OutputRow&, const OutputRow&) = default;
};

enum class OutputFormat { Csv, Json };

/// Selects which summary metrics become rows; empty means all.
struct RowFilter {
  std::vector<std::string> metrics;
  /// Appended as ":<suffix>" to every metric name when non-empty.
  std::string metric_suffix;
  bool include_seed_rows = true;
  bool include_mean_rows = true;
};

/// "%.12g"; non-finite values are not representable and render empty.
std::string render_number(double v);

/// Seed rows followed by one "mean" row per metric.
std::vector<OutputRow> rows_for_runs(const engine::ScenarioConfig& cfg,
                                     const std::vector<engine::RunResult>& runs,
                                     const RowFilter& filter = {});

/// Per area length and metric: one row per seed, then the "mean" row.
std::vector<OutputRow> rows_for_sweep(const engine::SweepSpec& spec,
                                      const engine::SweepResult& result,
                                      const RowFilter& filter = {});

std::string render_csv(const std::vector<OutputRow>& rows);
nlohmann::ordered_json render_json(const std::vector<OutputRow>& rows);

/// path "-" writes to stdout. Throws IoError naming the path, DomainError on
/// empty input.
void emit_results(const std::vector<OutputRow>& rows, OutputFormat format, const std::string& path);

}  // namespace fanetkm::cli
