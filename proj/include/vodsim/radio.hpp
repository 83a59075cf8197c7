#pragma once

namespace vodsim {

struct Position {
  double x_m = 0.0;
  double y_m = 0.0;
  bool operator==(const Position&) const = default;
};

double distance_m(const Position& a, const Position& b);

// Log-distance path-loss model with a 1 m reference distance. The link
// rates are effective application-layer throughputs, not PHY rates.
struct RadioParams {
  double tx_power_dbm = 15.0;
  double pl0_db = 40.0;         // path loss at d0 = 1 m
  double exponent = 3.0;        // path-loss exponent n
  double rssi_floor_dbm = -85.0;  // below this, nodes are out of discovery range
  double wifi_rate_bps = 6e6;
  double cell_rate_bps = 2e6;   // per-node 3G rate
  bool tiered_wifi_rate = false;  // halve wifi rate below the tier cutoff

  void validate() const;  // throws ConfigError
  bool operator==(const RadioParams&) const = default;
};

// Wi-Fi rate tier boundary when tiered_wifi_rate is enabled.
inline constexpr double kTieredRateCutoffDbm = -75.0;

// pl0 + 10*n*log10(max(d, 1 m) / 1 m). Distances below the reference
// distance are clamped to it. Throws ConfigError on non-finite input.
double path_loss_db(double dist_m, const RadioParams& params);

double rssi_dbm(const Position& a, const Position& b, const RadioParams& params);

bool in_range(const Position& a, const Position& b, const RadioParams& params);

// Effective Wi-Fi rate for a link heard at the given RSSI.
double wifi_rate_bps_for(double link_rssi_dbm, const RadioParams& params);

}  // namespace vodsim
