#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fanetkm/errors.hpp"
#include "fanetkm/radio.hpp"
#include "fanetkm/random.hpp"

using namespace fanetkm;
using namespace fanetkm::radio;

namespace {

// Crossover at 900 MHz with 1 m antennas is ~37.7 m, so 100 m is in the
// two-ray region.
RadioConfig two_ray_900() {
  RadioConfig c;
  c.model = PropagationModel::TwoRay;
  c.tx_power_dbm = 0;
  c.freq_hz = 900e6;
  c.ant_height_tx_m = 1;
  c.ant_height_rx_m = 1;
  return c;
}

std::vector<NodePair> brute_pairs(const std::vector<Vec3>& p, double r) {
  std::vector<NodePair> out;
  for (NodeId i = 0; i < p.size(); ++i) {
    for (NodeId j = i + 1; j < p.size(); ++j) {
      const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y, dz = p[i].z - p[j].z;
      if ((dx * dx + dy * dy) + dz * dz <= r * r) out.push_back({i, j});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("free space at the reference distance returns the transmit power") {
  RadioConfig c;
  const double d = c.wavelength() / (4 * std::numbers::pi);
  CHECK(received_power(c, d) == doctest::Approx(c.tx_power_dbm).epsilon(1e-12));
}

TEST_CASE("free space at 100 m") {
  RadioConfig c;
  CHECK(received_power(c, 100.0) == doctest::Approx(-72.55).epsilon(1e-4));
}

TEST_CASE("two-ray at 100 m") {
  auto c = two_ray_900();
  CHECK(crossover_distance(c) < 100.0);
  CHECK(received_power(c, 100.0) == doctest::Approx(-80.0).epsilon(1e-12));
}

TEST_CASE("two-ray falls back to free space below the crossover") {
  auto c = two_ray_900();
  auto fs = c;
  fs.model = PropagationModel::FreeSpace;
  const double dc = crossover_distance(c);
  CHECK(received_power(c, dc / 2) == received_power(fs, dc / 2));
  CHECK(received_power(c, dc) == doctest::Approx(received_power(fs, dc)).epsilon(1e-12));
}

TEST_CASE("received power rejects non-positive distances") {
  RadioConfig c;
  CHECK_THROWS_AS(received_power(c, 0.0), DomainError);
  CHECK_THROWS_AS(received_power(c, -1.0), DomainError);
}

TEST_CASE("comm_range examples") {
  RadioConfig c;
  CHECK(comm_range(c) == doctest::Approx(100.0).epsilon(1e-3));

  RadioConfig id;
  id.rx_threshold_dbm = id.tx_power_dbm;
  CHECK(comm_range(id) == doctest::Approx(id.wavelength() / (4 * std::numbers::pi)));

  auto tr = two_ray_900();
  tr.rx_threshold_dbm = -80.0;
  CHECK(comm_range(tr) == doctest::Approx(100.0).epsilon(1e-12));

  RadioConfig ex;
  ex.explicit_range_m = 250.0;
  ex.rx_threshold_dbm = 1000.0;
  CHECK(comm_range(ex) == 250.0);
}

TEST_CASE("comm_range reports unreachable thresholds") {
  RadioConfig c;
  c.rx_threshold_dbm = 1e308;
  CHECK_THROWS_AS(comm_range(c), NoCoverageError);
}

TEST_CASE("received power is strictly decreasing") {
  for (auto cfg : {RadioConfig{}, two_ray_900()}) {
    double prev = received_power(cfg, 0.01);
    for (int i = 1; i <= 10000; ++i) {
      const double d = 0.01 + i * 0.1;
      const double p = received_power(cfg, d);
      REQUIRE(p < prev);
      prev = p;
    }
  }
}

TEST_CASE("comm_range inverts received_power") {
  for (auto cfg : {RadioConfig{}, two_ray_900()}) {
    for (double thr : {-50.0, -72.55, -80.0, -95.0}) {
      cfg.rx_threshold_dbm = thr;
      CHECK(std::abs(received_power(cfg, comm_range(cfg)) - thr) <= 1e-6);
    }
  }
}

TEST_CASE("contact_pairs examples") {
  std::vector<Vec3> same{{1, 2, 3}, {1, 2, 3}};
  CHECK(contact_pairs(same, 0.0) == std::vector<NodePair>{{0, 1}});

  std::vector<Vec3> far{{0, 0, 0}, {0, 0, 150}};
  CHECK(contact_pairs(far, 100.0).empty());

  std::vector<Vec3> line{{0, 0, 0}, {90, 0, 0}, {180, 0, 0}};
  CHECK(contact_pairs(line, 100.0) == std::vector<NodePair>{{0, 1}, {1, 2}});
}

TEST_CASE("contact_pairs matches a brute-force oracle") {
  RandomStream rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.uniform_int(0, 50));
    std::vector<Vec3> p;
    for (std::size_t i = 0; i < n; ++i) {
      p.push_back({rng.uniform(0, 300), rng.uniform(0, 300), rng.uniform(0, 50)});
    }
    const double r = rng.uniform(0, 150);
    const auto got = contact_pairs(p, r);
    REQUIRE(got == brute_pairs(p, r));
    for (const auto& e : got) REQUIRE(e.lo < e.hi);
  }
}

TEST_CASE("radio config validation") {
  RadioConfig c;
  c.freq_hz = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  RadioConfig t = two_ray_900();
  t.ant_height_rx_m = 0;
  CHECK_THROWS_AS(t.validate(), ConfigError);
  RadioConfig e;
  e.explicit_range_m = 0.0;
  CHECK_THROWS_AS(e.validate(), ConfigError);
}
