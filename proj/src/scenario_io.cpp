#include "vodsim/scenario_io.hpp"

#include <fstream>
#include <set>

#include "vodsim/errors.hpp"

namespace vodsim {

namespace {

using nlohmann::json;

// Wraps one JSON object, tracks which keys get read, and rejects
// leftovers by name.
class StrictObject {
 public:
  StrictObject(const json& j, std::string context) : j_(j), ctx_(std::move(context)) {
    if (!j_.is_object()) throw ConfigError(ctx_ + ": expected an object");
  }

  bool has(const std::string& key) {
    if (j_.contains(key)) {
      used_.insert(key);
      return true;
    }
    return false;
  }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(ctx_ + ": missing field \"" + key + "\"");
    used_.insert(key);
    return j_.at(key);
  }

  template <typename T>
  T get(const std::string& key) {
    try {
      return at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(ctx_ + "." + key + ": wrong type");
    }
  }

  template <typename T>
  T get_or(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    return get<T>(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (used_.count(it.key()) == 0) {
        throw ConfigError(ctx_ + ": unknown field \"" + it.key() + "\"");
      }
    }
  }

 private:
  const json& j_;
  std::string ctx_;
  std::set<std::string> used_;
};

VideoSpec parse_video(const json& j) {
  StrictObject o(j, "video");
  VideoSpec v;
  v.piece_count = o.get_or<std::uint32_t>("piece_count", v.piece_count);
  v.piece_size_bytes = o.get_or<std::uint64_t>("piece_size_bytes", v.piece_size_bytes);
  v.bitrate_bps = o.get_or<double>("bitrate_bps", v.bitrate_bps);
  o.finish();
  return v;
}

RadioParams parse_radio(const json& j) {
  StrictObject o(j, "radio");
  RadioParams r;
  r.tx_power_dbm = o.get_or<double>("tx_power_dbm", r.tx_power_dbm);
  r.pl0_db = o.get_or<double>("pl0_db", r.pl0_db);
  r.exponent = o.get_or<double>("exponent", r.exponent);
  r.rssi_floor_dbm = o.get_or<double>("rssi_floor_dbm", r.rssi_floor_dbm);
  r.wifi_rate_bps = o.get_or<double>("wifi_rate_bps", r.wifi_rate_bps);
  r.cell_rate_bps = o.get_or<double>("cell_rate_bps", r.cell_rate_bps);
  r.tiered_wifi_rate = o.get_or<bool>("tiered_wifi_rate", r.tiered_wifi_rate);
  o.finish();
  return r;
}

DiscoveryTimers parse_timers(const json& j) {
  StrictObject o(j, "timers");
  DiscoveryTimers t;
  t.probe_interval_s = o.get_or<double>("probe_s", t.probe_interval_s);
  t.report_interval_s = o.get_or<double>("report_s", t.report_interval_s);
  t.staleness_rounds = o.get_or<int>("staleness_rounds", t.staleness_rounds);
  t.probe_loss_prob = o.get_or<double>("probe_loss_prob", t.probe_loss_prob);
  o.finish();
  return t;
}

SchedulerConfig parse_scheduler(const json& j) {
  StrictObject o(j, "scheduler");
  SchedulerConfig s;
  s.trust_threshold = o.get_or<double>("trust_threshold", s.trust_threshold);
  s.rssi_threshold_dbm = o.get_or<double>("rssi_threshold_dbm", s.rssi_threshold_dbm);
  if (o.has("grouping")) s.grouping = grouping_from_string(o.at("grouping").get<std::string>());
  s.sticky_blacklist = o.get_or<bool>("sticky_blacklist", s.sticky_blacklist);
  s.default_trust = o.get_or<double>("default_trust", s.default_trust);
  o.finish();
  return s;
}

ClientConfig parse_client(const json& j) {
  StrictObject o(j, "client");
  ClientConfig c;
  if (o.has("prebuffer_s")) {
    const json& v = o.at("prebuffer_s");
    if (!v.is_null()) c.prebuffer_s = v.get<double>();
  }
  c.high_watermark_s = o.get_or<double>("high_watermark_s", c.high_watermark_s);
  c.pipeline_depth = o.get_or<std::uint32_t>("pipeline_depth", c.pipeline_depth);
  o.finish();
  return c;
}

Layout parse_layout(const json& j) {
  StrictObject o(j, "layout");
  Layout l;
  l.square_side_m.reset();
  if (o.has("square_side_m")) l.square_side_m = o.at("square_side_m").get<double>();
  if (o.has("positions")) {
    std::vector<Position> ps;
    for (const json& p : o.at("positions")) {
      if (!p.is_array() || p.size() != 2) {
        throw ConfigError("layout.positions entries must be [x, y]");
      }
      ps.push_back(Position{p[0].get<double>(), p[1].get<double>()});
    }
    l.positions = std::move(ps);
  }
  if (o.has("waypoints")) {
    std::vector<std::vector<Waypoint>> tracks;
    for (const json& track : o.at("waypoints")) {
      std::vector<Waypoint> t;
      for (const json& w : track) {
        if (!w.is_array() || w.size() != 3) {
          throw ConfigError("layout.waypoints entries must be [t, x, y]");
        }
        t.push_back(Waypoint{w[0].get<double>(), w[1].get<double>(), w[2].get<double>()});
      }
      tracks.push_back(std::move(t));
    }
    l.waypoints = std::move(tracks);
  }
  o.finish();
  return l;
}

std::vector<TrustEvent> parse_trust_events(const json& j) {
  if (!j.is_array()) throw ConfigError("trust_events must be an array");
  std::vector<TrustEvent> events;
  for (std::size_t i = 0; i < j.size(); ++i) {
    StrictObject o(j[i], "trust_events[" + std::to_string(i) + "]");
    TrustEvent ev;
    ev.at_s = o.get<double>("at");
    ev.evaluator = o.get<NodeId>("evaluator");
    ev.subject = o.get<NodeId>("subject");
    ev.value = o.get<double>("value");
    o.finish();
    events.push_back(ev);
  }
  return events;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  StrictObject o(j, "scenario");
  Scenario s;
  s.schema_version = o.get_or<std::uint32_t>("schema_version", 1);
  s.node_count = o.get_or<std::uint32_t>("node_count", s.node_count);
  if (o.has("layout")) s.layout = parse_layout(o.at("layout"));
  if (o.has("video")) s.video = parse_video(o.at("video"));
  if (o.has("radio")) s.radio = parse_radio(o.at("radio"));
  if (o.has("timers")) s.timers = parse_timers(o.at("timers"));
  if (o.has("scheduler")) s.scheduler = parse_scheduler(o.at("scheduler"));
  if (o.has("client")) s.client = parse_client(o.at("client"));
  if (o.has("trust_events")) s.trust_events = parse_trust_events(o.at("trust_events"));

  if (o.has("start_offsets")) {
    const json& v = o.at("start_offsets");
    if (!v.is_null()) s.start_offsets = v.get<std::vector<double>>();
  }
  if (o.has("offset_range_s")) {
    const json& v = o.at("offset_range_s");
    if (v.is_number()) {
      s.offset_range_lo_s = 0.0;
      s.offset_range_hi_s = v.get<double>();
    } else if (v.is_array() && v.size() == 2) {
      s.offset_range_lo_s = v[0].get<double>();
      s.offset_range_hi_s = v[1].get<double>();
    } else {
      throw ConfigError("offset_range_s must be a number or [lo, hi]");
    }
  }
  if (o.has("mode")) s.mode = mode_from_string(o.at("mode").get<std::string>());
  s.seed = o.get_or<std::uint64_t>("seed", s.seed);
  s.duration_cap_s = o.get_or<double>("duration_cap_s", s.duration_cap_s);
  s.cell_max_concurrent =
      o.get_or<std::uint32_t>("cell_max_concurrent", s.cell_max_concurrent);
  o.finish();

  s.validate();
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["node_count"] = s.node_count;

  json layout = json::object();
  if (s.layout.square_side_m) layout["square_side_m"] = *s.layout.square_side_m;
  if (s.layout.positions) {
    json ps = json::array();
    for (const Position& p : *s.layout.positions) ps.push_back({p.x_m, p.y_m});
    layout["positions"] = ps;
  }
  if (s.layout.waypoints) {
    json tracks = json::array();
    for (const auto& track : *s.layout.waypoints) {
      json t = json::array();
      for (const Waypoint& w : track) t.push_back({w.t_s, w.x_m, w.y_m});
      tracks.push_back(t);
    }
    layout["waypoints"] = tracks;
  }
  j["layout"] = layout;

  j["video"] = {{"piece_count", s.video.piece_count},
                {"piece_size_bytes", s.video.piece_size_bytes},
                {"bitrate_bps", s.video.bitrate_bps}};
  j["radio"] = {{"tx_power_dbm", s.radio.tx_power_dbm},
                {"pl0_db", s.radio.pl0_db},
                {"exponent", s.radio.exponent},
                {"rssi_floor_dbm", s.radio.rssi_floor_dbm},
                {"wifi_rate_bps", s.radio.wifi_rate_bps},
                {"cell_rate_bps", s.radio.cell_rate_bps},
                {"tiered_wifi_rate", s.radio.tiered_wifi_rate}};
  j["timers"] = {{"probe_s", s.timers.probe_interval_s},
                 {"report_s", s.timers.report_interval_s},
                 {"staleness_rounds", s.timers.staleness_rounds},
                 {"probe_loss_prob", s.timers.probe_loss_prob}};
  j["scheduler"] = {{"trust_threshold", s.scheduler.trust_threshold},
                    {"rssi_threshold_dbm", s.scheduler.rssi_threshold_dbm},
                    {"grouping", to_string(s.scheduler.grouping)},
                    {"sticky_blacklist", s.scheduler.sticky_blacklist},
                    {"default_trust", s.scheduler.default_trust}};
  j["client"] = {{"prebuffer_s",
                  s.client.prebuffer_s ? json(*s.client.prebuffer_s) : json(nullptr)},
                 {"high_watermark_s", s.client.high_watermark_s},
                 {"pipeline_depth", s.client.pipeline_depth}};

  json events = json::array();
  for (const TrustEvent& ev : s.trust_events) {
    events.push_back({{"at", ev.at_s},
                      {"evaluator", ev.evaluator},
                      {"subject", ev.subject},
                      {"value", ev.value}});
  }
  j["trust_events"] = events;

  j["start_offsets"] = s.start_offsets ? json(*s.start_offsets) : json(nullptr);
  j["offset_range_s"] = {s.offset_range_lo_s, s.offset_range_hi_s};
  j["mode"] = to_string(s.mode);
  j["seed"] = s.seed;
  j["duration_cap_s"] = s.duration_cap_s;
  j["cell_max_concurrent"] = s.cell_max_concurrent;
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario file " + path + " is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace vodsim
