#include "fanetkm/engine.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "fanetkm/errors.hpp"
#include "fanetkm/graph.hpp"

namespace fanetkm::engine {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

// Accumulates a canonical text rendering of the config for hashing.
class Canon {
 public:
  Canon& operator()(std::string_view key, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return put(key, buf);
  }
  Canon& operator()(std::string_view key, std::uint64_t v) { return put(key, std::to_string(v)); }
  Canon& operator()(std::string_view key, std::string_view v) { return put(key, v); }
  std::uint64_t hash() const {
    return keying::fnv1a64(
        {reinterpret_cast<const std::uint8_t*>(text_.data()), text_.size()});
  }

 private:
  Canon& put(std::string_view key, std::string_view v) {
    text_.append(key).append("=").append(v).append(";");
    return *this;
  }
  std::string text_;
};

double mean_of(const std::vector<metrics::SnapshotMetrics>& snaps,
               std::optional<double> metrics::SnapshotMetrics::*field, bool& defined) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& s : snaps) {
    if (s.*field) {
      sum += *(s.*field);
      ++count;
    }
  }
  defined = count > 0;
  return defined ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

std::string_view to_string(NetworkKind kind) {
  return kind == NetworkKind::Fanet ? "FANET" : "MANET";
}

std::string_view to_string(mobility::MobilityModel model) {
  return model == mobility::MobilityModel::RandomWaypoint ? "RWP" : "GM";
}

std::string_view to_string(keying::StrategyKind kind) {
  switch (kind) {
    case keying::StrategyKind::ExpiredOnlyReplace:
      return "expired_only_replace";
    case keying::StrategyKind::Hybrid:
      return "hybrid";
    case keying::StrategyKind::FreshestReplace:
      break;
  }
  return "freshest_replace";
}

void ScenarioConfig::validate() const {
  if (n == 0) throw EmptyScenarioError("nodes: scenario must contain at least one node");
  require(n >= 2, "nodes: key-path metrics need at least 2 nodes");
  require(n < graph::kUnreachable, "nodes: at most 65534 nodes are supported");
  box.validate();
  mobility.validate();
  radio.validate();
  require(key_ttl > 0.0, "keying.ttl_s: must be > 0");
  if (capacity) require(*capacity >= 1, "keying.capacity: must be >= 1 or unlimited");
  if (strategy.kind == keying::StrategyKind::Hybrid) {
    require(capacity.has_value() && *capacity == strategy.k1 + strategy.k2,
            "keying.capacity: hybrid strategy requires capacity == k1 + k2");
  }
  require(std::isfinite(duration) && duration > 0.0, "duration_s: must be > 0");
  require(std::isfinite(snapshot_dt) && snapshot_dt > 0.0, "snapshot_dt_s: must be > 0");
  require(snapshot_dt <= duration, "snapshot_dt_s: must not exceed duration_s");
  const double substeps = snapshot_dt / mobility.step_dt;
  require(substeps >= 1.0 - 1e-9 && std::abs(substeps - std::round(substeps)) < 1e-9,
          "mobility.step_dt: snapshot_dt_s must be an integer multiple of step_dt");
  require(metrics_stride >= 1, "metrics_stride: must be >= 1");
  require(!seeds.empty(), "seeds: at least one seed is required");
  try {
    curve.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("keying.curve: ") + e.what());
  }
  try {
    (void)radio::comm_range(radio);
  } catch (const NoCoverageError& e) {
    throw ConfigError(std::string("radio.rx_threshold_dbm: ") + e.what());
  }
}

std::size_t ScenarioConfig::snapshot_count() const {
  return static_cast<std::size_t>(std::llround(duration / snapshot_dt));
}

std::uint64_t ScenarioConfig::fingerprint() const {
  Canon c;
  c("kind", to_string(network_kind))("n", std::uint64_t{n});
  c("box.x", box.x_len)("box.y", box.y_len)("box.z", box.z_len);
  c("mob.model", to_string(mobility.model))("mob.vmin", mobility.v_min)("mob.vmax", mobility.v_max);
  c("mob.pause", mobility.pause_s)("mob.alpha", mobility.gm_alpha)("mob.mean", mobility.mean_speed());
  c("mob.pitch", mobility.gm_pitch_max)("mob.dt", mobility.step_dt);
  c("radio.model", radio.model == radio::PropagationModel::TwoRay ? "tworay" : "freespace");
  c("radio.pt", radio.tx_power_dbm)("radio.gt", radio.tx_gain_db)("radio.gr", radio.rx_gain_db);
  c("radio.f", radio.freq_hz)("radio.thr", radio.rx_threshold_dbm);
  c("radio.ht", radio.ant_height_tx_m)("radio.hr", radio.ant_height_rx_m);
  c("radio.range", radio.explicit_range_m.value_or(-1.0));
  c("key.ttl", key_ttl)("key.strategy", to_string(strategy.kind));
  c("key.k1", std::uint64_t{strategy.k1})("key.k2", std::uint64_t{strategy.k2});
  c("key.cap", capacity ? std::uint64_t{*capacity} : ~std::uint64_t{0});
  c("curve.p", curve.p)("curve.a", curve.a)("curve.b", curve.b)("curve.n", curve.n);
  c("curve.gx", curve.g.x)("curve.gy", curve.g.y);
  c("duration", duration)("dt", snapshot_dt)("stride", std::uint64_t{metrics_stride});
  return c.hash();
}

ScenarioConfig default_scenario(NetworkKind kind) {
  ScenarioConfig cfg;
  cfg.network_kind = kind;
  cfg.seeds.clear();
  for (std::uint64_t s = 1; s <= 20; ++s) cfg.seeds.push_back(s);
  if (kind == NetworkKind::Fanet) {
    cfg.box = {1000.0, 1000.0, 100.0};
    cfg.mobility.v_max = 50.0;
    cfg.radio.model = radio::PropagationModel::FreeSpace;
  } else {
    cfg.box = {1000.0, 1000.0, 0.0};
    cfg.mobility.v_max = 20.0;
    cfg.radio.model = radio::PropagationModel::TwoRay;
  }
  return cfg;
}

ScenarioConfig with_limited_storage(ScenarioConfig cfg, keying::StrategyKind kind) {
  cfg.capacity = 10;
  cfg.key_ttl = 100.0;
  switch (kind) {
    case keying::StrategyKind::FreshestReplace:
      cfg.strategy = keying::Strategy::freshest();
      break;
    case keying::StrategyKind::ExpiredOnlyReplace:
      cfg.strategy = keying::Strategy::expired_only();
      break;
    case keying::StrategyKind::Hybrid:
      cfg.strategy = keying::Strategy::hybrid(5, 5);
      break;
  }
  return cfg;
}

std::vector<double> default_area_lengths() {
  std::vector<double> out;
  for (int l = 500; l <= 1500; l += 100) out.push_back(l);
  return out;
}

RunResult run(const ScenarioConfig& cfg, std::uint64_t seed, const RunOptions& options) {
  cfg.validate();

  const std::size_t n = cfg.n;
  const double r = radio::comm_range(cfg.radio);
  const auto& curve = cfg.curve;

  RunResult res;
  res.seed = seed;
  res.config_fingerprint = cfg.fingerprint();
  res.comm_range_m = r;
  res.comm_density_2d = metrics::comm_density_2d(cfg.box.x_len, cfg.box.y_len, r, n);
  res.comm_density_3d = metrics::comm_density_3d(
      cfg.box.x_len, cfg.box.y_len, cfg.box.is_2d() ? kReferenceElevationM : cfg.box.z_len, r, n);

  std::vector<RandomStream> mob_rng, key_rng, sig_rng;
  std::vector<mobility::MobilityState> states;
  std::vector<keying::KeyPair> keypairs;
  std::vector<keying::PublicKeyRecord> records;
  for (std::size_t i = 0; i < n; ++i) {
    mob_rng.push_back(RandomStream::derive(seed, i, StreamPurpose::Mobility));
    key_rng.push_back(RandomStream::derive(seed, i, StreamPurpose::Keying));
    sig_rng.push_back(RandomStream::derive(seed, i, StreamPurpose::Signing));
    states.push_back(mobility::init_state(cfg.box, cfg.mobility, mob_rng[i]));
    keypairs.push_back(keying::keygen(curve, key_rng[i], 0.0, cfg.key_ttl));
    records.push_back(
        keying::make_record(keypairs[i], static_cast<NodeId>(i), curve, sig_rng[i]));
  }
  std::vector<keying::KeyTable> tables(n, keying::KeyTable(cfg.capacity, cfg.strategy));
  keying::RecordVerifier verifier(curve);
  metrics::VisitTracker tracker(n);
  std::vector<Vec3> positions(n);

  const std::size_t snapshots = cfg.snapshot_count();
  const auto substeps =
      static_cast<std::size_t>(std::llround(cfg.snapshot_dt / cfg.mobility.step_dt));
  res.connectivity.reserve(snapshots);
  res.snapshots.reserve(snapshots / cfg.metrics_stride + 1);

  for (std::size_t k = 1; k <= snapshots; ++k) {
    const Seconds t = static_cast<double>(k) * cfg.snapshot_dt;

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t s = 0; s < substeps; ++s) {
        states[i] = mobility::step(states[i], cfg.mobility, cfg.box, mob_rng[i]);
      }
      positions[i] = states[i].pos;
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (keypairs[i].valid_at(t)) continue;
      keypairs[i] = keying::rotate_if_expired(keypairs[i], curve, key_rng[i], t, cfg.key_ttl);
      records[i] = keying::make_record(keypairs[i], static_cast<NodeId>(i), curve, sig_rng[i]);
    }

    const graph::Graph phys = graph::build_phys_graph(positions, r);
    const std::vector<NodePair> contacts = phys.edges();
    try {
      for (const NodePair& c : contacts) {
        keying::exchange(tables[c.lo], tables[c.hi], records[c.lo], records[c.hi], t, verifier);
      }
    } catch (const RejectedInputError& e) {
      throw SimulationError("t=" + std::to_string(t) + ": " + e.what());
    }
    tracker.update(contacts, t);
    for (auto& table : tables) table.purge_expired(t);

    const graph::Graph key_g = graph::build_key_graph(tables, records, t);
    const bool connected = graph::is_connected(key_g);
    res.connectivity.push_back({t, connected});
    for (NodeId i = 0; i < n; ++i) res.neighbor_moments.add(static_cast<double>(phys.degree(i)));

    if ((k - 1) % cfg.metrics_stride != 0) continue;

    const metrics::KeypathStats stats = metrics::keypath_stats(key_g, phys);
    metrics::SnapshotMetrics snap;
    snap.t = t;
    snap.keypath_prob = stats.keypath_prob;
    snap.avg_de_steps = stats.avg_de_steps;
    snap.avg_keypath_hops = stats.avg_keypath_hops;
    snap.avg_overall_len = stats.avg_overall_len;
    snap.avg_expanded_keypath_hops = stats.avg_expanded_keypath_hops;
    snap.fully_key_connected = connected;
    snap.inequality_violations = stats.inequality_violations;
    res.inequality_violations += stats.inequality_violations;
    if (options.keep_neighbor_counts) {
      snap.neighbor_counts.reserve(n);
      for (NodeId i = 0; i < n; ++i) {
        snap.neighbor_counts.push_back(static_cast<std::uint16_t>(phys.degree(i)));
      }
    }
    res.snapshots.push_back(std::move(snap));
  }

  res.ttfc = metrics::ttfc(res.connectivity);
  const metrics::VisitMetrics visits = metrics::visit_metrics(tracker, cfg.duration);
  res.visit_all_fraction = visits.visit_all_fraction;
  res.avg_time_to_visit_all = visits.avg_time_to_visit_all;
  if (res.neighbor_moments.count() >= 2) res.density = res.neighbor_moments.finish();
  res.signature_verifications = verifier.verifications();
  return res;
}

const std::vector<std::string>& summary_metric_names() {
  static const std::vector<std::string> names = {
      "keypath_prob",       "avg_de_steps",        "avg_keypath_hops",
      "avg_overall_len",    "ttfc_s",              "visit_all_fraction",
      "time_to_visit_all_s", "neighbor_mean",      "neighbor_variance",
      "neighbor_skewness",  "neighbor_excess_kurtosis", "path_inequality_violations",
  };
  return names;
}

std::vector<std::optional<double>> summarize(const RunResult& r) {
  std::vector<std::optional<double>> out;
  out.reserve(summary_metric_names().size());

  double prob = 0.0;
  for (const auto& s : r.snapshots) prob += s.keypath_prob;
  out.emplace_back(r.snapshots.empty() ? std::nullopt
                                       : std::optional(prob / static_cast<double>(r.snapshots.size())));

  using SM = metrics::SnapshotMetrics;
  for (auto field : {&SM::avg_de_steps, &SM::avg_keypath_hops, &SM::avg_overall_len}) {
    bool defined = false;
    const double v = mean_of(r.snapshots, field, defined);
    out.emplace_back(defined ? std::optional(v) : std::nullopt);
  }
  out.emplace_back(r.ttfc);
  out.emplace_back(r.visit_all_fraction);
  out.emplace_back(r.avg_time_to_visit_all);
  if (r.density) {
    out.emplace_back(r.density->mean);
    out.emplace_back(r.density->variance);
    out.emplace_back(r.density->skewness);
    out.emplace_back(r.density->excess_kurtosis);
  } else {
    out.insert(out.end(), 4, std::nullopt);
  }
  out.emplace_back(static_cast<double>(r.inequality_violations));
  return out;
}

}  // namespace fanetkm::engine
