#include "fanetkm/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "fanetkm/errors.hpp"

namespace fanetkm::cli {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
  throw ConfigError(ConfigErrorKind::InvalidValue, field + ": " + why);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) invalid(where.empty() ? "config" : where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) {
      throw ConfigError(ConfigErrorKind::UnknownField,
                        (where.empty() ? "" : where + ".") + item.key() + ": unknown field");
    }
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) invalid(field, "must be finite");
  return d;
}

std::uint64_t integer(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) invalid(field, "must be >= 0");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  invalid(field, "expected a non-negative integer");
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "expected a string");
  return v.get<std::string>();
}

engine::NetworkKind parse_kind(const json& v) {
  const std::string s = text(v, "network_kind");
  if (s == "FANET") return engine::NetworkKind::Fanet;
  if (s == "MANET" || s == "VANET") return engine::NetworkKind::Manet;
  invalid("network_kind", "expected FANET or MANET (got '" + s + "')");
}

void apply_box(const json& j, mobility::BoundingBox& box) {
  check_keys(j, "box", {"x_len", "y_len", "z_len"});
  if (j.contains("x_len")) box.x_len = number(j["x_len"], "box.x_len");
  if (j.contains("y_len")) box.y_len = number(j["y_len"], "box.y_len");
  if (j.contains("z_len")) box.z_len = number(j["z_len"], "box.z_len");
}

void apply_mobility(const json& j, mobility::MobilityConfig& m) {
  check_keys(j, "mobility",
             {"model", "v_min", "v_max", "pause_s", "gm_alpha", "gm_mean_speed", "gm_pitch_max",
              "step_dt"});
  if (j.contains("model")) {
    const std::string s = text(j["model"], "mobility.model");
    if (s == "RWP") {
      m.model = mobility::MobilityModel::RandomWaypoint;
    } else if (s == "GM") {
      m.model = mobility::MobilityModel::GaussMarkov;
    } else {
      invalid("mobility.model", "expected RWP or GM (got '" + s + "')");
    }
  }
  if (j.contains("v_min")) m.v_min = number(j["v_min"], "mobility.v_min");
  if (j.contains("v_max")) m.v_max = number(j["v_max"], "mobility.v_max");
  if (j.contains("pause_s")) m.pause_s = number(j["pause_s"], "mobility.pause_s");
  if (j.contains("gm_alpha")) m.gm_alpha = number(j["gm_alpha"], "mobility.gm_alpha");
  if (j.contains("gm_mean_speed")) {
    const json& v = j["gm_mean_speed"];
    m.gm_mean_speed =
        v.is_null() ? std::nullopt : std::optional(number(v, "mobility.gm_mean_speed"));
  }
  if (j.contains("gm_pitch_max")) m.gm_pitch_max = number(j["gm_pitch_max"], "mobility.gm_pitch_max");
  if (j.contains("step_dt")) m.step_dt = number(j["step_dt"], "mobility.step_dt");
}

void apply_radio(const json& j, radio::RadioConfig& r) {
  check_keys(j, "radio",
             {"model", "tx_power_dbm", "tx_gain_db", "rx_gain_db", "freq_hz", "rx_threshold_dbm",
              "ant_height_tx_m", "ant_height_rx_m", "explicit_range_m"});
  if (j.contains("model")) {
    const std::string s = text(j["model"], "radio.model");
    if (s == "free_space") {
      r.model = radio::PropagationModel::FreeSpace;
    } else if (s == "two_ray") {
      r.model = radio::PropagationModel::TwoRay;
    } else {
      invalid("radio.model", "expected free_space or two_ray (got '" + s + "')");
    }
  }
  if (j.contains("tx_power_dbm")) r.tx_power_dbm = number(j["tx_power_dbm"], "radio.tx_power_dbm");
  if (j.contains("tx_gain_db")) r.tx_gain_db = number(j["tx_gain_db"], "radio.tx_gain_db");
  if (j.contains("rx_gain_db")) r.rx_gain_db = number(j["rx_gain_db"], "radio.rx_gain_db");
  if (j.contains("freq_hz")) r.freq_hz = number(j["freq_hz"], "radio.freq_hz");
  if (j.contains("rx_threshold_dbm")) {
    r.rx_threshold_dbm = number(j["rx_threshold_dbm"], "radio.rx_threshold_dbm");
  }
  if (j.contains("ant_height_tx_m")) {
    r.ant_height_tx_m = number(j["ant_height_tx_m"], "radio.ant_height_tx_m");
  }
  if (j.contains("ant_height_rx_m")) {
    r.ant_height_rx_m = number(j["ant_height_rx_m"], "radio.ant_height_rx_m");
  }
  if (j.contains("explicit_range_m")) {
    const json& v = j["explicit_range_m"];
    r.explicit_range_m =
        v.is_null() ? std::nullopt : std::optional(number(v, "radio.explicit_range_m"));
  }
}

ecc::CurveParams parse_curve(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "demo") return ecc::CurveParams::demo();
    if (s == "toy") return ecc::CurveParams::toy();
    invalid("keying.curve", "expected demo, toy or an explicit parameter object");
  }
  check_keys(v, "keying.curve", {"p", "a", "b", "gx", "gy", "n", "h"});
  ecc::CurveParams c;
  for (auto key : {"p", "a", "b", "gx", "gy", "n"}) {
    if (!v.contains(key)) invalid(std::string("keying.curve.") + key, "required");
  }
  c.p = integer(v["p"], "keying.curve.p");
  c.a = integer(v["a"], "keying.curve.a");
  c.b = integer(v["b"], "keying.curve.b");
  c.g = ecc::AffinePoint::at(integer(v["gx"], "keying.curve.gx"), integer(v["gy"], "keying.curve.gy"));
  c.n = integer(v["n"], "keying.curve.n");
  c.h = v.contains("h") ? integer(v["h"], "keying.curve.h") : 1;
  return c;
}

json curve_to_json(const ecc::CurveParams& c) {
  if (c == ecc::CurveParams::demo()) return "demo";
  if (c == ecc::CurveParams::toy()) return "toy";
  return {{"p", c.p}, {"a", c.a}, {"b", c.b}, {"gx", c.g.x}, {"gy", c.g.y}, {"n", c.n}, {"h", c.h}};
}

void apply_keying(const json& j, engine::ScenarioConfig& cfg) {
  check_keys(j, "keying", {"ttl_s", "capacity", "strategy", "k1", "k2", "curve"});
  if (j.contains("ttl_s")) {
    const json& v = j["ttl_s"];
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "inf")) {
      cfg.key_ttl = kNever;
    } else {
      cfg.key_ttl = number(v, "keying.ttl_s");
    }
  }
  if (j.contains("capacity")) {
    const json& v = j["capacity"];
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "unlimited")) {
      cfg.capacity.reset();
    } else {
      cfg.capacity = static_cast<std::size_t>(integer(v, "keying.capacity"));
    }
  }
  if (j.contains("strategy")) {
    const std::string s = text(j["strategy"], "keying.strategy");
    if (s == "freshest_replace") {
      cfg.strategy.kind = keying::StrategyKind::FreshestReplace;
    } else if (s == "expired_only_replace") {
      cfg.strategy.kind = keying::StrategyKind::ExpiredOnlyReplace;
    } else if (s == "hybrid") {
      cfg.strategy.kind = keying::StrategyKind::Hybrid;
    } else {
      invalid("keying.strategy",
              "expected freshest_replace, expired_only_replace or hybrid (got '" + s + "')");
    }
  }
  if (j.contains("k1")) cfg.strategy.k1 = static_cast<std::size_t>(integer(j["k1"], "keying.k1"));
  if (j.contains("k2")) cfg.strategy.k2 = static_cast<std::size_t>(integer(j["k2"], "keying.k2"));
  if (j.contains("curve")) cfg.curve = parse_curve(j["curve"]);
}

void apply_fields(const json& doc, engine::ScenarioConfig& cfg, bool allow_sweep) {
  if (allow_sweep) {
    check_keys(doc, "",
               {"network_kind", "nodes", "box", "mobility", "radio", "keying", "duration_s",
                "snapshot_dt_s", "metrics_stride", "seeds", "area_lengths"});
  } else {
    check_keys(doc, "",
               {"network_kind", "nodes", "box", "mobility", "radio", "keying", "duration_s",
                "snapshot_dt_s", "metrics_stride", "seeds"});
  }
  if (doc.contains("nodes")) cfg.n = static_cast<std::size_t>(integer(doc["nodes"], "nodes"));
  if (doc.contains("box")) apply_box(doc["box"], cfg.box);
  if (doc.contains("mobility")) apply_mobility(doc["mobility"], cfg.mobility);
  if (doc.contains("radio")) apply_radio(doc["radio"], cfg.radio);
  if (doc.contains("keying")) apply_keying(doc["keying"], cfg);
  if (doc.contains("duration_s")) cfg.duration = number(doc["duration_s"], "duration_s");
  if (doc.contains("snapshot_dt_s")) cfg.snapshot_dt = number(doc["snapshot_dt_s"], "snapshot_dt_s");
  if (doc.contains("metrics_stride")) {
    cfg.metrics_stride = static_cast<std::size_t>(integer(doc["metrics_stride"], "metrics_stride"));
  }
  if (doc.contains("seeds")) {
    const json& s = doc["seeds"];
    if (!s.is_array()) invalid("seeds", "expected an array of integers");
    cfg.seeds.clear();
    for (const json& v : s) cfg.seeds.push_back(integer(v, "seeds"));
  }
}

}  // namespace

void apply_overrides(const json& doc, engine::ScenarioConfig& cfg) {
  if (doc.contains("network_kind") && parse_kind(doc["network_kind"]) != cfg.network_kind) {
    invalid("network_kind", "override cannot change the network kind");
  }
  apply_fields(doc, cfg, false);
}

ScenarioOrSweep parse_scenario_json(const json& doc) {
  if (!doc.is_object()) invalid("config", "top level must be a JSON object");
  const engine::NetworkKind kind =
      doc.contains("network_kind") ? parse_kind(doc["network_kind"]) : engine::NetworkKind::Fanet;
  engine::ScenarioConfig cfg = engine::default_scenario(kind);
  apply_fields(doc, cfg, true);

  if (doc.contains("area_lengths")) {
    const json& a = doc["area_lengths"];
    if (!a.is_array()) invalid("area_lengths", "expected an array of numbers");
    engine::SweepSpec spec;
    spec.network_kind = kind;
    for (const json& v : a) spec.area_lengths.push_back(number(v, "area_lengths"));
    spec.base = cfg;
    spec.validate();
    return spec;
  }
  cfg.validate();
  return cfg;
}

ScenarioOrSweep parse_scenario_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigErrorKind::MalformedSyntax, std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario_json(doc);
}

ScenarioOrSweep parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(ConfigErrorKind::MissingFile,
                      "cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.kind(), path.string() + ": " + e.what());
  }
}

json to_json(const engine::ScenarioConfig& cfg) {
  json j;
  j["network_kind"] = std::string(engine::to_string(cfg.network_kind));
  j["nodes"] = cfg.n;
  j["box"] = {{"x_len", cfg.box.x_len}, {"y_len", cfg.box.y_len}, {"z_len", cfg.box.z_len}};
  const auto& m = cfg.mobility;
  j["mobility"] = {{"model", std::string(engine::to_string(m.model))},
                   {"v_min", m.v_min},
                   {"v_max", m.v_max},
                   {"pause_s", m.pause_s},
                   {"gm_alpha", m.gm_alpha},
                   {"gm_mean_speed", m.gm_mean_speed ? json(*m.gm_mean_speed) : json(nullptr)},
                   {"gm_pitch_max", m.gm_pitch_max},
                   {"step_dt", m.step_dt}};
  const auto& r = cfg.radio;
  j["radio"] = {
      {"model", r.model == radio::PropagationModel::TwoRay ? "two_ray" : "free_space"},
      {"tx_power_dbm", r.tx_power_dbm},
      {"tx_gain_db", r.tx_gain_db},
      {"rx_gain_db", r.rx_gain_db},
      {"freq_hz", r.freq_hz},
      {"rx_threshold_dbm", r.rx_threshold_dbm},
      {"ant_height_tx_m", r.ant_height_tx_m},
      {"ant_height_rx_m", r.ant_height_rx_m},
      {"explicit_range_m", r.explicit_range_m ? json(*r.explicit_range_m) : json(nullptr)}};
  j["keying"] = {{"ttl_s", std::isinf(cfg.key_ttl) ? json("inf") : json(cfg.key_ttl)},
                 {"capacity", cfg.capacity ? json(*cfg.capacity) : json("unlimited")},
                 {"strategy", std::string(engine::to_string(cfg.strategy.kind))},
                 {"k1", cfg.strategy.k1},
                 {"k2", cfg.strategy.k2},
                 {"curve", curve_to_json(cfg.curve)}};
  j["duration_s"] = cfg.duration;
  j["snapshot_dt_s"] = cfg.snapshot_dt;
  j["metrics_stride"] = cfg.metrics_stride;
  j["seeds"] = cfg.seeds;
  return j;
}

json to_json(const engine::SweepSpec& spec) {
  json j = to_json(spec.base);
  j["area_lengths"] = spec.area_lengths;
  return j;
}

std::string defaults_help() {
  return R"(Scenario defaults (JSON config; unknown fields are rejected):
  network_kind      FANET | MANET                     FANET
  nodes                                               100
  box               {x_len, y_len, z_len} m           1000 x 1000 x 100 (MANET: z_len 0)
  mobility.model    RWP | GM                          GM
  mobility.v_min/v_max  m/s                           0 / 50 (MANET: 0 / 20)
  mobility.pause_s                                    0
  mobility.gm_alpha                                   0.85
  mobility.gm_mean_speed  m/s                         null = (v_min + v_max) / 2
  mobility.gm_pitch_max   rad                         0.05
  mobility.step_dt  s                                 1
  radio.model       free_space | two_ray              free_space (MANET: two_ray)
  radio.tx_power_dbm                                  7.5
  radio.tx_gain_db / rx_gain_db                       0 / 0
  radio.freq_hz                                       2.4e9
  radio.rx_threshold_dbm                              -72.55  (~100 m range)
  radio.ant_height_tx_m / ant_height_rx_m             1.5 / 1.5
  radio.explicit_range_m  m, overrides the threshold  null
  keying.ttl_s      seconds | "inf"                   "inf"
  keying.capacity   entries | "unlimited"             "unlimited"
  keying.strategy   freshest_replace | expired_only_replace | hybrid
                                                      freshest_replace
  keying.k1 / k2    hybrid partition sizes            0 / 0
  keying.curve      demo | toy | {p,a,b,gx,gy,n,h}    demo
  duration_s                                          1000
  snapshot_dt_s                                       1
  metrics_stride    snapshots between metric samples  1
  seeds             array of integers                 1..20
  area_lengths      sweep only, m                     500, 600, ..., 1500
)";
}

}  // namespace fanetkm::cli
