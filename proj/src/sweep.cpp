#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "fanetkm/engine.hpp"
#include "fanetkm/errors.hpp"

namespace fanetkm::engine {

void SweepSpec::validate() const {
  if (area_lengths.empty()) throw ConfigError("area_lengths: at least one length is required");
  for (double l : area_lengths) {
    if (!(l > 0.0)) throw ConfigError("area_lengths: every length must be > 0");
  }
  if (base.network_kind != network_kind) {
    throw ConfigError("network_kind: sweep kind differs from the base scenario");
  }
  scenario_for(area_lengths.front()).validate();
}

ScenarioConfig SweepSpec::scenario_for(double area_length) const {
  ScenarioConfig cfg = base;
  cfg.box.x_len = area_length;
  cfg.box.y_len = area_length;
  return cfg;
}

std::size_t default_parallelism() {
  if (const char* env = std::getenv("FANETKM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

SweepResult sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  const auto& seeds = spec.base.seeds;
  const std::size_t jobs = spec.area_lengths.size() * seeds.size();

  std::vector<std::optional<RunResult>> slots(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const double length = spec.area_lengths[job / seeds.size()];
      const std::uint64_t seed = seeds[job % seeds.size()];
      try {
        slots[job] = run(spec.scenario_for(length), seed, options.run);
      } catch (...) {
        errors[job] = std::current_exception();
      }
    }
  };

  const std::size_t threads =
      std::min(jobs, options.threads ? options.threads : default_parallelism());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t job = 0; job < jobs; ++job) {
    if (!errors[job]) continue;
    const std::string where = "sweep run area_length=" +
                              std::to_string(spec.area_lengths[job / seeds.size()]) +
                              " seed=" + std::to_string(seeds[job % seeds.size()]) + ": ";
    try {
      std::rethrow_exception(errors[job]);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw SimulationError(where + e.what());
    }
  }

  SweepResult out;
  out.rows.reserve(jobs);
  const std::size_t metric_count = summary_metric_names().size();
  for (std::size_t li = 0; li < spec.area_lengths.size(); ++li) {
    SweepAggregate agg;
    agg.area_length = spec.area_lengths[li];
    std::vector<double> sums(metric_count, 0.0);
    std::vector<std::size_t> counts(metric_count, 0);
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      RunResult& result = *slots[li * seeds.size() + si];
      agg.comm_density_2d = result.comm_density_2d;
      agg.comm_density_3d = result.comm_density_3d;
      agg.neighbor_moments.merge(result.neighbor_moments);
      const auto values = summarize(result);
      for (std::size_t m = 0; m < metric_count; ++m) {
        if (values[m]) {
          sums[m] += *values[m];
          ++counts[m];
        }
      }
      ++agg.runs;
      out.rows.push_back({agg.area_length, seeds[si], std::move(result)});
    }
    for (std::size_t m = 0; m < metric_count; ++m) {
      agg.means.push_back(counts[m] ? std::optional(sums[m] / static_cast<double>(counts[m]))
                                    : std::nullopt);
    }
    out.aggregates.push_back(std::move(agg));
  }
  return out;
}

}  // namespace fanetkm::engine
