#include <doctest.h>

#include <vector>

#include "fanetkm/ecc.hpp"
#include "fanetkm/errors.hpp"
#include "fanetkm/selftest.hpp"

using namespace fanetkm;
using namespace fanetkm::ecc;

namespace {

std::vector<AffinePoint> all_points(const CurveParams& c) {
  std::vector<AffinePoint> pts{AffinePoint::identity()};
  for (std::uint64_t x = 0; x < c.p; ++x) {
    for (std::uint64_t y = 0; y < c.p; ++y) {
      if ((y * y) % c.p == (x * x * x + c.a * x + c.b) % c.p) pts.push_back(AffinePoint::at(x, y));
    }
  }
  return pts;
}

}  // namespace

TEST_CASE("toy curve point addition examples") {
  const auto c = CurveParams::toy();
  const auto g = AffinePoint::at(5, 1);
  CHECK(point_add(g, AffinePoint::identity(), c) == g);
  CHECK(point_add(AffinePoint::identity(), g, c) == g);
  CHECK(point_add(g, g, c) == AffinePoint::at(6, 3));
  CHECK(point_add(g, AffinePoint::at(6, 3), c) == AffinePoint::at(10, 6));
  CHECK(point_add(g, negate(g, c), c) == AffinePoint::identity());
}

TEST_CASE("toy curve scalar multiplication examples") {
  const auto c = CurveParams::toy();
  CHECK(scalar_mul(1, c.g, c) == c.g);
  CHECK(scalar_mul(2, c.g, c) == AffinePoint::at(6, 3));
  CHECK(scalar_mul(19, c.g, c) == AffinePoint::identity());
  CHECK(scalar_mul(0, c.g, c) == AffinePoint::identity());
}

TEST_CASE("off-curve input is rejected") {
  const auto c = CurveParams::toy();
  CHECK_THROWS_AS(point_add(AffinePoint::at(1, 1), c.g, c), DomainError);
  CHECK_THROWS_AS(scalar_mul(3, AffinePoint::at(1, 1), c), DomainError);
}

TEST_CASE("toy group has 19 elements and satisfies the group laws") {
  const auto c = CurveParams::toy();
  const auto pts = all_points(c);
  REQUIRE(pts.size() == 19);
  CHECK(selftest::count_points(c) == 19);
  for (const auto& p : pts) {
    for (const auto& q : pts) {
      const auto pq = point_add(p, q, c);
      REQUIRE((pq.infinity || c.contains(pq)));
      REQUIRE(pq == point_add(q, p, c));
      for (const auto& r : pts) {
        REQUIRE(point_add(pq, r, c) == point_add(p, point_add(q, r, c), c));
      }
    }
  }
}

TEST_CASE("scalar multiplication matches repeated addition") {
  const auto c = CurveParams::toy();
  auto acc = AffinePoint::identity();
  for (Scalar s = 0; s <= 19; ++s) {
    REQUIRE(scalar_mul(s, c.g, c) == acc);
    acc = point_add(acc, c.g, c);
  }
}

TEST_CASE("modular helpers") {
  CHECK(is_prime(2));
  CHECK(is_prime(16777213));
  CHECK(is_prime(16781357));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(16777215));
  CHECK(mul_mod(inv_mod(7, 19), 7, 19) == 1);
  CHECK(pow_mod(3, 18, 19) == 1);
  CHECK_THROWS_AS(inv_mod(0, 17), DomainError);
}

TEST_CASE("curve validation") {
  CHECK_NOTHROW(CurveParams::toy().validate());
  CHECK_NOTHROW(CurveParams::demo().validate());
  auto bad = CurveParams::toy();
  bad.n = 18;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  auto off = CurveParams::toy();
  off.g = AffinePoint::at(1, 1);
  CHECK_THROWS_AS(off.validate(), DomainError);
}

TEST_CASE("self-test suite passes") {
  for (const auto& check : selftest::ecc_selftest()) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.passed);
  }
}
