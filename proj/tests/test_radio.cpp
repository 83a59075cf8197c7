#include <cmath>

#include "doctest.h"
#include "vodsim/errors.hpp"
#include "vodsim/radio.hpp"
#include "vodsim/rng.hpp"

using namespace vodsim;

TEST_CASE("path loss at the reference distance equals pl0") {
  RadioParams p;
  CHECK(path_loss_db(1.0, p) == doctest::Approx(40.0));
}

TEST_CASE("path loss at 10 m with n=3 and pl0=40 is 70 dB") {
  RadioParams p;
  // Hand check: 40 + 10*3*log10(10) = 40 + 30.
  CHECK(path_loss_db(10.0, p) == doctest::Approx(70.0));
}

TEST_CASE("distances below 1 m clamp to the reference distance") {
  RadioParams p;
  CHECK(path_loss_db(0.2, p) == doctest::Approx(path_loss_db(1.0, p)));
  CHECK(path_loss_db(0.0, p) == doctest::Approx(40.0));
}

TEST_CASE("non-finite distance is rejected") {
  RadioParams p;
  CHECK_THROWS_AS(path_loss_db(std::nan(""), p), ConfigError);
  CHECK_THROWS_AS(path_loss_db(-1.0, p), ConfigError);
}

TEST_CASE("co-located nodes hear each other at tx minus pl0") {
  RadioParams p;
  Position a{3.0, 4.0};
  CHECK(rssi_dbm(a, a, p) == doctest::Approx(-25.0));  // 15 - 40
}

TEST_CASE("rssi is symmetric for random positions") {
  RadioParams p;
  RngStream rng(42, "radio-symmetry");
  for (int i = 0; i < 200; ++i) {
    Position a{rng.uniform(-500, 500), rng.uniform(-500, 500)};
    Position b{rng.uniform(-500, 500), rng.uniform(-500, 500)};
    CHECK(rssi_dbm(a, b, p) == doctest::Approx(rssi_dbm(b, a, p)));
    CHECK(in_range(a, b, p) == in_range(b, a, p));
  }
}

TEST_CASE("discovery range with defaults is 100 m") {
  RadioParams p;
  // Invert: 15 - 40 - 30*log10(d) = -85  =>  d = 10^(60/30) = 100.
  Position origin{0, 0};
  CHECK(in_range(origin, Position{99.9, 0}, p));
  CHECK_FALSE(in_range(origin, Position{100.1, 0}, p));

  // Brute-force scan: the predicate flips exactly once, at 100 m.
  double last_in_range = 0.0;
  double first_out_of_range = 0.0;
  for (double d = 0.5; d <= 200.0; d += 0.5) {
    if (in_range(origin, Position{d, 0}, p)) {
      CHECK(first_out_of_range == 0.0);  // no flip back
      last_in_range = d;
    } else if (first_out_of_range == 0.0) {
      first_out_of_range = d;
    }
  }
  CHECK(last_in_range == doctest::Approx(100.0));
  CHECK(first_out_of_range == doctest::Approx(100.5));
}

TEST_CASE("nodes 1 km apart with defaults are out of range") {
  RadioParams p;
  CHECK_FALSE(in_range(Position{0, 0}, Position{1000, 0}, p));
}

TEST_CASE("a node is in range of itself") {
  RadioParams p;
  Position a{7, 7};
  CHECK(in_range(a, a, p));
}

TEST_CASE("path loss and rssi are monotone in distance") {
  RadioParams p;
  RngStream rng(7, "radio-monotone");
  for (int i = 0; i < 200; ++i) {
    double d1 = rng.uniform(0.0, 300.0);
    double d2 = d1 + rng.uniform(0.0, 300.0);
    CHECK(path_loss_db(d1, p) <= path_loss_db(d2, p) + 1e-12);
    Position o{0, 0};
    CHECK(rssi_dbm(o, Position{d1, 0}, p) >= rssi_dbm(o, Position{d2, 0}, p) - 1e-12);
  }
}

TEST_CASE("in_range agrees with the rssi floor by definition") {
  RadioParams p;
  RngStream rng(11, "radio-consistency");
  for (int i = 0; i < 500; ++i) {
    Position a{rng.uniform(0, 200), rng.uniform(0, 200)};
    Position b{rng.uniform(0, 200), rng.uniform(0, 200)};
    CHECK(in_range(a, b, p) == (rssi_dbm(a, b, p) >= p.rssi_floor_dbm));
  }
}

TEST_CASE("tiered wifi rate halves below the cutoff") {
  RadioParams p;
  CHECK(wifi_rate_bps_for(-60.0, p) == doctest::Approx(6e6));
  CHECK(wifi_rate_bps_for(-80.0, p) == doctest::Approx(6e6));  // tier off by default
  p.tiered_wifi_rate = true;
  CHECK(wifi_rate_bps_for(-60.0, p) == doctest::Approx(6e6));
  CHECK(wifi_rate_bps_for(-75.0, p) == doctest::Approx(6e6));  // boundary inclusive
  CHECK(wifi_rate_bps_for(-75.1, p) == doctest::Approx(3e6));
}

TEST_CASE("radio params are validated") {
  RadioParams p;
  CHECK_NOTHROW(p.validate());
  p.exponent = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = RadioParams{};
  p.rssi_floor_dbm = 0.0;  // above tx - pl0
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
