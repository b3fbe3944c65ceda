#include "fanetkm/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "fanetkm/errors.hpp"

namespace fanetkm::cli {

namespace {

bool selected(const RowFilter& filter, const std::string& name) {
  return filter.metrics.empty() ||
         std::find(filter.metrics.begin(), filter.metrics.end(), name) != filter.metrics.end();
}

std::string metric_label(const RowFilter& filter, const std::string& name) {
  return filter.metric_suffix.empty() ? name : name + ":" + filter.metric_suffix;
}

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

// Values in JSON are parsed back from the CSV text so both formats agree.
nlohmann::ordered_json number_json(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return std::stod(render_number(*v));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string render_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<OutputRow> rows_for_runs(const engine::ScenarioConfig& cfg,
                                     const std::vector<engine::RunResult>& runs,
                                     const RowFilter& filter) {
  std::vector<OutputRow> rows;
  if (runs.empty()) return rows;
  const auto& names = engine::summary_metric_names();
  std::vector<std::vector<std::optional<double>>> summaries;
  for (const auto& r : runs) summaries.push_back(engine::summarize(r));

  const OutputRow proto{std::string(engine::to_string(cfg.network_kind)),
                        std::string(engine::to_string(cfg.mobility.model)),
                        cfg.box.x_len,
                        runs.front().comm_density_2d,
                        runs.front().comm_density_3d,
                        {},
                        {},
                        {}};
  for (std::size_t m = 0; m < names.size(); ++m) {
    if (!selected(filter, names[m])) continue;
    std::vector<std::optional<double>> column;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      column.push_back(summaries[i][m]);
      if (filter.include_seed_rows) {
        OutputRow row = proto;
        row.metric = metric_label(filter, names[m]);
        row.value = summaries[i][m];
        row.seed = std::to_string(runs[i].seed);
        rows.push_back(std::move(row));
      }
    }
    if (filter.include_mean_rows) {
      OutputRow row = proto;
      row.metric = metric_label(filter, names[m]);
      row.value = mean_of(column);
      row.seed = "mean";
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<OutputRow> rows_for_sweep(const engine::SweepSpec& spec,
                                      const engine::SweepResult& result,
                                      const RowFilter& filter) {
  std::vector<OutputRow> rows;
  const auto& names = engine::summary_metric_names();
  const std::string kind(engine::to_string(spec.network_kind));
  const std::string model(engine::to_string(spec.base.mobility.model));
  for (const auto& agg : result.aggregates) {
    std::vector<const engine::SweepRow*> members;
    for (const auto& r : result.rows) {
      if (r.area_length == agg.area_length) members.push_back(&r);
    }
    std::vector<std::vector<std::optional<double>>> summaries;
    for (const auto* r : members) summaries.push_back(engine::summarize(r->result));
    for (std::size_t m = 0; m < names.size(); ++m) {
      if (!selected(filter, names[m])) continue;
      const OutputRow proto{kind,
                            model,
                            agg.area_length,
                            agg.comm_density_2d,
                            agg.comm_density_3d,
                            metric_label(filter, names[m]),
                            {},
                            {}};
      if (filter.include_seed_rows) {
        for (std::size_t i = 0; i < members.size(); ++i) {
          OutputRow row = proto;
          row.value = summaries[i][m];
          row.seed = std::to_string(members[i]->seed);
          rows.push_back(std::move(row));
        }
      }
      if (filter.include_mean_rows) {
        OutputRow row = proto;
        row.value = agg.means[m];
        row.seed = "mean";
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string render_csv(const std::vector<OutputRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += csv_field(r.network_kind) + ',' + csv_field(r.mobility_model) + ',' +
           render_number(r.area_length_m) + ',' + render_number(r.comm_density_2d) + ',' +
           render_number(r.comm_density_3d) + ',' + csv_field(r.metric) + ',' +
           (r.value ? render_number(*r.value) : std::string()) + ',' + csv_field(r.seed) + '\n';
  }
  return out;
}

nlohmann::ordered_json render_json(const std::vector<OutputRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    o["network_kind"] = r.network_kind;
    o["mobility_model"] = r.mobility_model;
    o["area_length_m"] = number_json(r.area_length_m);
    o["comm_density_2d"] = number_json(r.comm_density_2d);
    o["comm_density_3d"] = number_json(r.comm_density_3d);
    o["metric"] = r.metric;
    o["value"] = number_json(r.value);
    o["seed"] = r.seed;
    arr.push_back(std::move(o));
  }
  return arr;
}

void emit_results(const std::vector<OutputRow>& rows, OutputFormat format, const std::string& path) {
  if (rows.empty()) throw DomainError("emit_results: no result rows to write");
  const std::string body =
      format == OutputFormat::Csv ? render_csv(rows) : render_json(rows).dump(2) + "\n";
  if (path == "-") {
    std::cout << body;
    std::cout.flush();
    if (!std::cout) throw IoError("<stdout>: write failed");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << body;
  out.close();
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace fanetkm::cli
