#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vodsim/core.hpp"
#include "vodsim/discovery.hpp"
#include "vodsim/radio.hpp"
#include "vodsim/scheduler.hpp"

namespace vodsim {

enum class Mode { kServerOnly, kP2p };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);
std::string to_string(Grouping policy);
Grouping grouping_from_string(const std::string& s);

struct Waypoint {
  double t_s = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  bool operator==(const Waypoint&) const = default;
};

// Exactly one of the three must be set.
struct Layout {
  std::optional<double> square_side_m;  // uniform random placement, seeded
  std::optional<std::vector<Position>> positions;
  std::optional<std::vector<std::vector<Waypoint>>> waypoints;  // piecewise linear

  bool operator==(const Layout&) const = default;
};

struct SchedulerConfig {
  double trust_threshold = 0.5;
  double rssi_threshold_dbm = -75.0;
  Grouping grouping = Grouping::kGlobal;
  bool sticky_blacklist = false;
  double default_trust = 1.0;

  bool operator==(const SchedulerConfig&) const = default;
};

struct ClientConfig {
  std::optional<double> prebuffer_s;  // absent = one piece duration
  double high_watermark_s = 30.0;
  std::uint32_t pipeline_depth = 1;

  bool operator==(const ClientConfig&) const = default;
};

struct TrustEvent {
  double at_s = 0.0;
  NodeId evaluator = 0;
  NodeId subject = 0;
  double value = 1.0;

  bool operator==(const TrustEvent&) const = default;
};

struct Scenario {
  std::uint32_t schema_version = 1;
  std::uint32_t node_count = 30;
  Layout layout{50.0, std::nullopt, std::nullopt};
  VideoSpec video;
  RadioParams radio;
  DiscoveryTimers timers;
  SchedulerConfig scheduler;
  ClientConfig client;
  std::vector<TrustEvent> trust_events;
  std::optional<std::vector<double>> start_offsets;  // absent = drawn from range
  double offset_range_lo_s = 0.0;
  double offset_range_hi_s = 120.0;
  Mode mode = Mode::kP2p;
  std::uint64_t seed = 1;
  double duration_cap_s = 3600.0;
  std::uint32_t cell_max_concurrent = 0;  // 0 = unlimited server transfers

  void validate() const;  // throws ConfigError
  double resolved_prebuffer_s() const;
  bool operator==(const Scenario&) const = default;
};

Scenario make_default_scenario(std::uint32_t node_count);

// Node positions over time, resolved from the scenario layout (random
// square placement uses rng_stream(seed, "layout")).
class PositionModel {
 public:
  explicit PositionModel(const Scenario& scenario);
  Position at(NodeId node, double t_s) const;
  bool is_static() const { return static_; }

 private:
  std::vector<Position> base_;
  std::vector<std::vector<Waypoint>> tracks_;
  bool static_ = true;
};

// Per-node join times: explicit offsets, or uniform draws from the offset
// range via rng_stream(seed, "offsets").
std::vector<double> resolve_start_offsets(const Scenario& scenario);

}  // namespace vodsim
