#include "vodsim/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "vodsim/errors.hpp"
#include "vodsim/rng.hpp"

namespace vodsim {

std::string to_string(Mode mode) {
  return mode == Mode::kServerOnly ? "server-only" : "p2p";
}

Mode mode_from_string(const std::string& s) {
  if (s == "server-only") return Mode::kServerOnly;
  if (s == "p2p") return Mode::kP2p;
  throw ConfigError("mode must be \"server-only\" or \"p2p\", got \"" + s + "\"");
}

std::string to_string(Grouping policy) {
  return policy == Grouping::kGlobal ? "global" : "components";
}

Grouping grouping_from_string(const std::string& s) {
  if (s == "global") return Grouping::kGlobal;
  if (s == "components") return Grouping::kComponents;
  throw ConfigError("scheduler.grouping must be \"global\" or \"components\", got \"" +
                    s + "\"");
}

void Scenario::validate() const {
  if (schema_version != 1) throw ConfigError("unsupported schema_version");
  if (node_count < 1) throw ConfigError("node_count must be >= 1");
  video.validate();
  radio.validate();
  timers.validate();

  const int layout_choices = (layout.square_side_m ? 1 : 0) +
                             (layout.positions ? 1 : 0) +
                             (layout.waypoints ? 1 : 0);
  if (layout_choices != 1) {
    throw ConfigError("layout must set exactly one of square_side_m, positions, waypoints");
  }
  if (layout.square_side_m && !(*layout.square_side_m > 0.0)) {
    throw ConfigError("layout.square_side_m must be > 0");
  }
  if (layout.positions && layout.positions->size() != node_count) {
    throw ConfigError("layout.positions must list exactly node_count positions");
  }
  if (layout.waypoints) {
    if (layout.waypoints->size() != node_count) {
      throw ConfigError("layout.waypoints must list exactly node_count tracks");
    }
    for (const auto& track : *layout.waypoints) {
      if (track.empty()) throw ConfigError("layout.waypoints: empty track");
      for (std::size_t i = 1; i < track.size(); ++i) {
        if (track[i].t_s < track[i - 1].t_s) {
          throw ConfigError("layout.waypoints: times must be non-decreasing");
        }
      }
    }
  }

  if (!(scheduler.trust_threshold >= 0.0 && scheduler.trust_threshold <= 1.0)) {
    throw ConfigError("scheduler.trust_threshold must be in [0,1]");
  }
  if (!(scheduler.default_trust >= 0.0 && scheduler.default_trust <= 1.0)) {
    throw ConfigError("scheduler.default_trust must be in [0,1]");
  }
  if (scheduler.rssi_threshold_dbm < radio.rssi_floor_dbm) {
    throw ConfigError("scheduler.rssi_threshold_dbm must be >= radio.rssi_floor_dbm");
  }

  if (client.prebuffer_s && *client.prebuffer_s < 0.0) {
    throw ConfigError("client.prebuffer_s must be >= 0");
  }
  if (!(client.high_watermark_s > 0.0)) {
    throw ConfigError("client.high_watermark_s must be > 0");
  }
  if (resolved_prebuffer_s() > client.high_watermark_s) {
    throw ConfigError("client.prebuffer_s must not exceed client.high_watermark_s");
  }
  if (client.pipeline_depth < 1) {
    throw ConfigError("client.pipeline_depth must be >= 1");
  }

  for (std::size_t i = 0; i < trust_events.size(); ++i) {
    const TrustEvent& ev = trust_events[i];
    const std::string where = "trust_events[" + std::to_string(i) + "]";
    if (ev.evaluator >= node_count) {
      throw ConfigError(where + ": evaluator id " + std::to_string(ev.evaluator) +
                        " >= node_count");
    }
    if (ev.subject >= node_count) {
      throw ConfigError(where + ": subject id " + std::to_string(ev.subject) +
                        " >= node_count");
    }
    if (ev.evaluator == ev.subject) throw ConfigError(where + ": self-evaluation");
    if (!(ev.value >= 0.0 && ev.value <= 1.0)) {
      throw ConfigError(where + ": value must be in [0,1]");
    }
    if (ev.at_s < 0.0) throw ConfigError(where + ": at_s must be >= 0");
  }

  if (start_offsets) {
    if (start_offsets->size() != node_count) {
      throw ConfigError("start_offsets must list exactly node_count values");
    }
    for (double o : *start_offsets) {
      if (!(o >= 0.0) || !std::isfinite(o)) {
        throw ConfigError("start_offsets must be finite and >= 0");
      }
    }
  } else {
    if (offset_range_lo_s < 0.0 || offset_range_hi_s < offset_range_lo_s) {
      throw ConfigError("offset_range_s must satisfy 0 <= lo <= hi");
    }
  }

  if (!(duration_cap_s > 0.0)) throw ConfigError("duration_cap_s must be > 0");
}

double Scenario::resolved_prebuffer_s() const {
  return client.prebuffer_s.value_or(video.piece_duration_s());
}

Scenario make_default_scenario(std::uint32_t node_count) {
  Scenario s;
  s.node_count = node_count;
  return s;
}

PositionModel::PositionModel(const Scenario& scenario) {
  if (scenario.layout.waypoints) {
    tracks_ = *scenario.layout.waypoints;
    static_ = false;
    return;
  }
  if (scenario.layout.positions) {
    base_ = *scenario.layout.positions;
    return;
  }
  const double side = scenario.layout.square_side_m.value_or(50.0);
  RngStream rng(scenario.seed, "layout");
  base_.reserve(scenario.node_count);
  for (std::uint32_t i = 0; i < scenario.node_count; ++i) {
    const double x = rng.uniform(0.0, side);
    const double y = rng.uniform(0.0, side);
    base_.push_back(Position{x, y});
  }
}

Position PositionModel::at(NodeId node, double t_s) const {
  if (static_) return base_.at(node);
  const auto& track = tracks_.at(node);
  if (t_s <= track.front().t_s) return Position{track.front().x_m, track.front().y_m};
  for (std::size_t i = 1; i < track.size(); ++i) {
    if (t_s <= track[i].t_s) {
      const Waypoint& a = track[i - 1];
      const Waypoint& b = track[i];
      const double span = b.t_s - a.t_s;
      const double f = span > 0.0 ? (t_s - a.t_s) / span : 1.0;
      return Position{a.x_m + f * (b.x_m - a.x_m), a.y_m + f * (b.y_m - a.y_m)};
    }
  }
  return Position{track.back().x_m, track.back().y_m};
}

std::vector<double> resolve_start_offsets(const Scenario& scenario) {
  if (scenario.start_offsets) return *scenario.start_offsets;
  RngStream rng(scenario.seed, "offsets");
  std::vector<double> offsets;
  offsets.reserve(scenario.node_count);
  for (std::uint32_t i = 0; i < scenario.node_count; ++i) {
    offsets.push_back(rng.uniform(scenario.offset_range_lo_s, scenario.offset_range_hi_s));
  }
  return offsets;
}

}  // namespace vodsim
