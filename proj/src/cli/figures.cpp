#include "fanetkm/cli/figures.hpp"

#include <cmath>

#include "fanetkm/cli/config.hpp"
#include "fanetkm/errors.hpp"

namespace fanetkm::cli {

namespace {

using engine::NetworkKind;
using mobility::MobilityModel;

constexpr NetworkKind kKinds[] = {NetworkKind::Fanet, NetworkKind::Manet};
constexpr MobilityModel kModels[] = {MobilityModel::RandomWaypoint, MobilityModel::GaussMarkov};
constexpr keying::StrategyKind kStrategies[] = {keying::StrategyKind::FreshestReplace,
                                                keying::StrategyKind::ExpiredOnlyReplace,
                                                keying::StrategyKind::Hybrid};

engine::SweepSpec make_spec(engine::ScenarioConfig cfg, const nlohmann::json* overrides) {
  if (overrides) apply_overrides(*overrides, cfg);
  engine::SweepSpec spec;
  spec.network_kind = cfg.network_kind;
  spec.base = std::move(cfg);
  spec.area_lengths = engine::default_area_lengths();
  return spec;
}

}  // namespace

FigurePlan figure_plan(int number, const nlohmann::json* overrides) {
  FigurePlan plan;
  plan.number = number;
  std::vector<std::string> metrics;
  switch (number) {
    case 2:
      plan.title = "key-path existence probability";
      metrics = {"keypath_prob"};
      break;
    case 3:
      plan.title = "time to full key connectivity";
      metrics = {"ttfc_s"};
      break;
    case 4:
      plan.title = "intermediate DE steps";
      metrics = {"avg_de_steps"};
      break;
    case 5:
      plan.title = "probability of visiting all nodes";
      metrics = {"visit_all_fraction"};
      break;
    case 6:
      plan.title = "time to visit all nodes";
      metrics = {"time_to_visit_all_s"};
      break;
    case 7:
      plan.title = "key-path existence probability per storage strategy";
      metrics = {"keypath_prob"};
      break;
    case 8:
      plan.title = "intermediate DE steps and overall path length per storage strategy";
      metrics = {"avg_de_steps", "avg_overall_len"};
      break;
    default:
      throw ConfigError(ConfigErrorKind::InvalidValue,
                        "figure: expected a number in 2..8 (got " + std::to_string(number) + ")");
  }

  if (number <= 6) {
    for (NetworkKind kind : kKinds) {
      for (MobilityModel model : kModels) {
        engine::ScenarioConfig cfg = engine::default_scenario(kind);
        cfg.mobility.model = model;
        plan.series.push_back({make_spec(std::move(cfg), overrides), RowFilter{metrics, {}}});
      }
    }
  } else {
    for (MobilityModel model : kModels) {
      for (keying::StrategyKind strategy : kStrategies) {
        engine::ScenarioConfig cfg = engine::default_scenario(NetworkKind::Fanet);
        cfg.mobility.model = model;
        cfg = engine::with_limited_storage(std::move(cfg), strategy);
        plan.series.push_back({make_spec(std::move(cfg), overrides),
                               RowFilter{metrics, std::string(engine::to_string(strategy))}});
      }
    }
  }
  return plan;
}

void apply_run_options(FigurePlan& plan, const std::optional<std::vector<std::uint64_t>>& seeds,
                       std::optional<std::size_t> metrics_stride) {
  for (auto& s : plan.series) {
    if (seeds) s.spec.base.seeds = *seeds;
    if (metrics_stride) s.spec.base.metrics_stride = *metrics_stride;
  }
}

std::vector<OutputRow> run_figure(const FigurePlan& plan, const engine::SweepOptions& options) {
  std::vector<OutputRow> rows;
  engine::SweepOptions opts = options;
  opts.run.keep_neighbor_counts = false;
  for (const auto& series : plan.series) {
    const auto result = engine::sweep(series.spec, opts);
    auto part = rows_for_sweep(series.spec, result, series.filter);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

bool normality_within_tolerance(const metrics::DensityMoments& m) {
  return m.skewness && m.excess_kurtosis && std::abs(*m.skewness) <= 0.5 &&
         std::abs(*m.excess_kurtosis) <= 0.8;
}

std::vector<DensityCheckRow> density_check(const std::vector<double>& area_lengths,
                                           const std::vector<std::uint64_t>& seeds,
                                           const nlohmann::json* overrides,
                                           const engine::SweepOptions& options) {
  std::vector<DensityCheckRow> out;
  engine::SweepOptions opts = options;
  opts.run.keep_neighbor_counts = false;
  for (NetworkKind kind : kKinds) {
    for (MobilityModel model : kModels) {
      engine::ScenarioConfig cfg = engine::default_scenario(kind);
      cfg.mobility.model = model;
      cfg.seeds = seeds;
      engine::SweepSpec spec = make_spec(std::move(cfg), overrides);
      spec.area_lengths = area_lengths;
      const auto result = engine::sweep(spec, opts);
      for (const auto& agg : result.aggregates) {
        DensityCheckRow row{kind, model, agg.area_length, agg.comm_density_2d,
                            agg.comm_density_3d, agg.neighbor_moments.finish(), false};
        row.normal_like = normality_within_tolerance(row.moments);
        out.push_back(row);
      }
    }
  }
  return out;
}

std::vector<OutputRow> density_rows(const std::vector<DensityCheckRow>& rows) {
  std::vector<OutputRow> out;
  for (const auto& r : rows) {
    const OutputRow proto{std::string(engine::to_string(r.network_kind)),
                          std::string(engine::to_string(r.model)),
                          r.area_length,
                          r.comm_density_2d,
                          r.comm_density_3d,
                          {},
                          {},
                          "pooled"};
    const std::pair<const char*, std::optional<double>> values[] = {
        {"neighbor_mean", r.moments.mean},
        {"neighbor_variance", r.moments.variance},
        {"neighbor_skewness", r.moments.skewness},
        {"neighbor_excess_kurtosis", r.moments.excess_kurtosis},
        {"neighbor_samples", static_cast<double>(r.moments.count)},
        {"normality_ok", r.normal_like ? 1.0 : 0.0}};
    for (const auto& [name, value] : values) {
      OutputRow row = proto;
      row.metric = name;
      row.value = value;
      out.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace fanetkm::cli
