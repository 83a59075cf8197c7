#include "vodsim/radio.hpp"

#include <cmath>

#include "vodsim/errors.hpp"

namespace vodsim {

double distance_m(const Position& a, const Position& b) {
  return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

void RadioParams::validate() const {
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(pl0_db) ||
      !std::isfinite(exponent) || !std::isfinite(rssi_floor_dbm)) {
    throw ConfigError("radio: parameters must be finite");
  }
  if (!(exponent > 0.0)) throw ConfigError("radio.exponent must be > 0");
  if (!(wifi_rate_bps > 0.0)) throw ConfigError("radio.wifi_rate_bps must be > 0");
  if (!(cell_rate_bps > 0.0)) throw ConfigError("radio.cell_rate_bps must be > 0");
  if (!(rssi_floor_dbm < tx_power_dbm - pl0_db)) {
    throw ConfigError("radio.rssi_floor_dbm must be below tx_power_dbm - pl0_db");
  }
}

double path_loss_db(double dist_m, const RadioParams& params) {
  if (!std::isfinite(dist_m) || dist_m < 0.0) {
    throw ConfigError("path_loss: distance must be finite and >= 0");
  }
  const double d = dist_m < 1.0 ? 1.0 : dist_m;
  return params.pl0_db + 10.0 * params.exponent * std::log10(d);
}

double rssi_dbm(const Position& a, const Position& b, const RadioParams& params) {
  if (!std::isfinite(a.x_m) || !std::isfinite(a.y_m) ||
      !std::isfinite(b.x_m) || !std::isfinite(b.y_m)) {
    throw ConfigError("rssi: positions must be finite");
  }
  return params.tx_power_dbm - path_loss_db(distance_m(a, b), params);
}

bool in_range(const Position& a, const Position& b, const RadioParams& params) {
  return rssi_dbm(a, b, params) >= params.rssi_floor_dbm;
}

double wifi_rate_bps_for(double link_rssi_dbm, const RadioParams& params) {
  if (params.tiered_wifi_rate && link_rssi_dbm < kTieredRateCutoffDbm) {
    return params.wifi_rate_bps / 2.0;
  }
  return params.wifi_rate_bps;
}

}  // namespace vodsim
