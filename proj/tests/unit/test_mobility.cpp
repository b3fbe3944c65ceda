#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fanetkm/errors.hpp"
#include "fanetkm/mobility.hpp"

using namespace fanetkm;
using namespace fanetkm::mobility;

namespace {

MobilityConfig rwp(double vmin, double vmax, double pause = 0.0) {
  MobilityConfig c;
  c.model = MobilityModel::RandomWaypoint;
  c.v_min = vmin;
  c.v_max = vmax;
  c.pause_s = pause;
  return c;
}

bool inside(const BoundingBox& b, Vec3 p) {
  return p.x >= 0 && p.x <= b.x_len && p.y >= 0 && p.y <= b.y_len && p.z >= 0 && p.z <= b.z_len;
}

}  // namespace

TEST_CASE("init_positions in a planar box keeps z at zero") {
  BoundingBox box{100, 100, 0};
  RandomStream rng(7);
  auto states = init_positions(1, box, MobilityConfig{}, rng);
  REQUIRE(states.size() == 1);
  CHECK(states[0].pos.z == 0.0);
  CHECK(states[0].pos.x >= 0.0);
  CHECK(states[0].pos.x <= 100.0);
  CHECK(states[0].pos.y >= 0.0);
  CHECK(states[0].pos.y <= 100.0);
  CHECK(states[0].gm_pitch == 0.0);
}

TEST_CASE("init_positions is reproducible for a seed") {
  BoundingBox box;
  RandomStream a(42), b(42);
  CHECK(init_positions(3, box, MobilityConfig{}, a) == init_positions(3, box, MobilityConfig{}, b));
}

TEST_CASE("init_positions is uniform on average") {
  BoundingBox box{1000, 1000, 100};
  RandomStream rng(3);
  auto states = init_positions(10000, box, MobilityConfig{}, rng);
  double sx = 0, sy = 0, sz = 0;
  for (const auto& s : states) {
    sx += s.pos.x;
    sy += s.pos.y;
    sz += s.pos.z;
  }
  CHECK(std::abs(sx / 10000 - 500) <= 10.0);
  CHECK(std::abs(sy / 10000 - 500) <= 10.0);
  CHECK(std::abs(sz / 10000 - 50) <= 1.0);
}

TEST_CASE("init_positions rejects an empty scenario") {
  RandomStream rng(1);
  CHECK_THROWS_AS(init_positions(0, BoundingBox{}, MobilityConfig{}, rng), EmptyScenarioError);
}

TEST_CASE("gauss-markov initial state") {
  MobilityConfig c;
  c.v_min = 0;
  c.v_max = 50;
  RandomStream rng(5);
  for (const auto& s : init_positions(200, BoundingBox{}, c, rng)) {
    CHECK(s.gm_speed == 25.0);
    CHECK(s.gm_direction >= 0.0);
    CHECK(s.gm_direction < 2 * std::numbers::pi);
    CHECK(s.gm_pitch >= 0.0);
    CHECK(s.gm_pitch <= c.gm_pitch_max);
  }
}

TEST_CASE("rwp moves toward the waypoint") {
  BoundingBox box{100, 100, 100};
  MobilityState s;
  s.pos = {0, 0, 0};
  s.waypoint = Vec3{10, 0, 0};
  s.leg_speed = 2;
  RandomStream rng(1);
  auto next = rwp_step(s, rwp(2, 2), box, rng);
  CHECK(next.pos == Vec3{2, 0, 0});
  CHECK(next.waypoint == Vec3{10, 0, 0});
}

TEST_CASE("rwp clamps arrival and draws a new waypoint") {
  BoundingBox box{100, 100, 100};
  MobilityState s;
  s.pos = {9, 0, 0};
  s.waypoint = Vec3{10, 0, 0};
  s.leg_speed = 2;
  RandomStream rng(1);
  auto next = rwp_step(s, rwp(1, 3), box, rng);
  CHECK(next.pos == Vec3{10, 0, 0});
  REQUIRE(next.waypoint.has_value());
  CHECK(inside(box, *next.waypoint));
  CHECK(next.leg_speed >= 1.0);
  CHECK(next.leg_speed <= 3.0);
}

TEST_CASE("rwp pauses on arrival") {
  BoundingBox box{100, 100, 100};
  MobilityState s;
  s.pos = {9, 0, 0};
  s.waypoint = Vec3{10, 0, 0};
  s.leg_speed = 2;
  RandomStream rng(1);
  auto cfg = rwp(1, 3, 2.0);
  auto a = rwp_step(s, cfg, box, rng);
  CHECK(a.pos == Vec3{10, 0, 0});
  CHECK(a.pause_remaining == 2.0);
  auto b = rwp_step(a, cfg, box, rng);
  CHECK(b.pos == Vec3{10, 0, 0});
  CHECK(b.pause_remaining == 1.0);
}

TEST_CASE("rwp with fixed speed always uses it") {
  BoundingBox box{200, 200, 50};
  auto cfg = rwp(5, 5);
  RandomStream rng(11);
  auto states = init_positions(20, box, cfg, rng);
  for (int k = 0; k < 500; ++k) {
    for (auto& s : states) {
      s = rwp_step(s, cfg, box, rng);
      CHECK(s.leg_speed == 5.0);
    }
  }
}

TEST_CASE("rwp displacement is bounded by the leg speed") {
  BoundingBox box{300, 300, 100};
  auto cfg = rwp(0, 20);
  RandomStream rng(12);
  auto states = init_positions(50, box, cfg, rng);
  for (int k = 0; k < 2000; ++k) {
    for (auto& s : states) {
      auto next = rwp_step(s, cfg, box, rng);
      CHECK(distance(s.pos, next.pos) <= s.leg_speed * cfg.step_dt + 1e-9);
      s = next;
    }
  }
}

TEST_CASE("gauss-markov with alpha one keeps a straight line") {
  BoundingBox box{10000, 10000, 10000};
  MobilityConfig c;
  c.gm_alpha = 1.0;
  MobilityState s;
  s.pos = {5000, 5000, 5000};
  s.gm_speed = 10;
  s.gm_direction = 0.3;
  s.gm_pitch = 0.02;
  s.gm_mean_direction = 0.3;
  RandomStream rng(2);
  auto a = gm_step(s, c, box, rng);
  auto b = gm_step(a, c, box, rng);
  CHECK(a.gm_speed == s.gm_speed);
  CHECK(a.gm_direction == s.gm_direction);
  CHECK(a.gm_pitch == s.gm_pitch);
  const Vec3 d1 = a.pos - s.pos;
  const Vec3 d2 = b.pos - a.pos;
  CHECK(d1.x == doctest::Approx(d2.x));
  CHECK(d1.y == doctest::Approx(d2.y));
  CHECK(d1.z == doctest::Approx(d2.z));
  CHECK(d1.norm() == doctest::Approx(10.0));
}

TEST_CASE("gauss-markov with alpha zero and no noise reverts to the mean speed") {
  MobilityConfig c;
  c.gm_alpha = 0.0;
  c.v_min = 0;
  c.v_max = 50;
  c.gm_mean_speed = 17.0;
  MobilityState s;
  s.pos = {500, 500, 50};
  s.gm_speed = 3;
  auto next = gm_step(s, c, BoundingBox{}, GaussMarkovNoise{});
  CHECK(next.gm_speed == 17.0);
}

TEST_CASE("gauss-markov reflects at the ceiling") {
  BoundingBox box{1000, 1000, 100};
  MobilityConfig c;
  c.gm_alpha = 1.0;
  c.gm_pitch_max = 0.5;
  MobilityState s;
  s.pos = {500, 500, 99};
  s.gm_speed = 10;
  s.gm_direction = 0;
  s.gm_pitch = 0.4;
  auto next = gm_step(s, c, box, GaussMarkovNoise{});
  const double climb = 10 * std::sin(0.4);
  CHECK(inside(box, next.pos));
  CHECK(next.pos.z == doctest::Approx(100 - (99 + climb - 100)));
  CHECK(next.gm_pitch == doctest::Approx(-0.4));
}

TEST_CASE("positions stay inside the box over many steps") {
  for (auto model : {MobilityModel::RandomWaypoint, MobilityModel::GaussMarkov}) {
    for (BoundingBox box : {BoundingBox{500, 500, 100}, BoundingBox{300, 400, 0}}) {
      MobilityConfig c;
      c.model = model;
      c.v_min = 0;
      c.v_max = 50;
      RandomStream rng(99);
      auto states = init_positions(100, box, c, rng);
      for (int k = 0; k < 5000; ++k) {
        for (auto& s : states) {
          s = step(s, c, box, rng);
          REQUIRE(inside(box, s.pos));
          if (model == MobilityModel::GaussMarkov) {
            REQUIRE(s.gm_speed >= c.v_min);
            REQUIRE(s.gm_speed <= c.v_max);
            REQUIRE(std::abs(s.gm_pitch) <= c.gm_pitch_max);
            REQUIRE(s.gm_pitch * s.gm_pitch_sign >= 0.0);
            if (box.is_2d()) REQUIRE(s.pos.z == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("step is a pure function of state and stream") {
  MobilityConfig c;
  BoundingBox box;
  RandomStream init(4);
  auto s = init_state(box, c, init);
  RandomStream a(8), b(8);
  CHECK(step(s, c, box, a) == step(s, c, box, b));
}

TEST_CASE("config validation names the field") {
  MobilityConfig c;
  c.v_min = 10;
  c.v_max = 5;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mobility.v_min") != std::string::npos);
  }
  BoundingBox b{0, 10, 10};
  CHECK_THROWS_AS(b.validate(), ConfigError);
  MobilityConfig d;
  d.gm_alpha = 1.5;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}
