#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fanetkm/cli/output.hpp"
#include "fanetkm/engine.hpp"

namespace fanetkm::cli {

struct FigureSeries {
  engine::SweepSpec spec;
  RowFilter filter;
};

struct FigurePlan {
  int number = 0;
  std::string title;
  std::vector<FigureSeries> series;
};

/// Figures 2-6 cover FANET/MANET x RWP/GM with unlimited storage and
/// non-expiring keys; figures 7-8 cover the three storage strategies on FANET
/// for both mobility models, with metric names suffixed by the strategy.
/// `overrides` is applied to every series after the figure's own settings.
/// Throws ConfigError for an unknown figure number.
FigurePlan figure_plan(int number, const nlohmann::json* overrides = nullptr);

/// Sets the seeds and metrics stride of every series.
void apply_run_options(FigurePlan& plan, const std::optional<std::vector<std::uint64_t>>& seeds,
                       std::optional<std::size_t> metrics_stride);

std::vector<OutputRow> run_figure(const FigurePlan& plan, const engine::SweepOptions& options = {});

struct DensityCheckRow {
  engine::NetworkKind network_kind;
  mobility::MobilityModel model;
  double area_length = 0.0;
  double comm_density_2d = 0.0;
  double comm_density_3d = 0.0;
  metrics::DensityMoments moments;
  bool normal_like = false;
};

/// |skewness| <= 0.5 and |excess kurtosis| <= 0.8.
bool normality_within_tolerance(const metrics::DensityMoments& m);

/// Pooled neighbor-count moments for both network kinds and both mobility
/// models at each area length.
std::vector<DensityCheckRow> density_check(const std::vector<double>& area_lengths,
                                           const std::vector<std::uint64_t>& seeds,
                                           const nlohmann::json* overrides,
                                           const engine::SweepOptions& options = {});

std::vector<OutputRow> density_rows(const std::vector<DensityCheckRow>& rows);

}  // namespace fanetkm::cli
