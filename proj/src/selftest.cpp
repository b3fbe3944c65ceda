#include "fanetkm/selftest.hpp"

#include <string>

#include "fanetkm/keying.hpp"
#include "fanetkm/random.hpp"

namespace fanetkm::selftest {

using ecc::AffinePoint;
using ecc::CurveParams;

std::uint64_t count_points(const CurveParams& c) {
  // sqrt_count[v] = number of y with y^2 = v.
  std::vector<std::uint8_t> sqrt_count(c.p, 0);
  for (std::uint64_t y = 0; y < c.p; ++y) ++sqrt_count[ecc::mul_mod(y, y, c.p)];
  std::uint64_t total = 1;
  for (std::uint64_t x = 0; x < c.p; ++x) {
    const std::uint64_t rhs =
        (ecc::mul_mod(ecc::mul_mod(x, x, c.p), x, c.p) + ecc::mul_mod(c.a, x, c.p) + c.b) % c.p;
    total += sqrt_count[rhs];
  }
  return total;
}

std::vector<Check> ecc_selftest(std::size_t tamper_cases, std::uint64_t seed, bool include_demo) {
  std::vector<Check> out;
  const CurveParams toy = CurveParams::toy();

  {
    Check c{"toy curve parameters validate", true, ""};
    try {
      toy.validate();
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = e.what();
    }
    out.push_back(c);
  }
  {
    const auto count = count_points(toy);
    out.push_back({"toy group order by enumeration", count == toy.n * toy.h,
                   "counted " + std::to_string(count)});
  }
  {
    bool ok = true;
    AffinePoint acc = AffinePoint::identity();
    std::uint64_t first_bad = 0;
    for (std::uint64_t s = 0; s <= 19; ++s) {
      if (ecc::scalar_mul(s, toy.g, toy) != acc && ok) {
        ok = false;
        first_bad = s;
      }
      acc = ecc::point_add(acc, toy.g, toy);
    }
    out.push_back({"s*G matches repeated addition, s = 0..19", ok,
                   ok ? "" : "mismatch at s=" + std::to_string(first_bad)});
  }
  out.push_back({"19*G is the identity", ecc::scalar_mul(19, toy.g, toy).infinity, ""});

  RandomStream rng(seed);
  const keying::KeyPair kp = keying::keygen(toy, rng, 0.0, 100.0);
  const keying::PublicKeyRecord rec = keying::make_record(kp, 7, toy, rng);
  out.push_back({"sign/verify round trip", keying::verify_record(rec, toy), ""});

  {
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < tamper_cases; ++i) {
      keying::PublicKeyRecord t = rec;
      switch (rng.uniform_int(0, 4)) {
        case 0:
          t.owner += static_cast<NodeId>(rng.uniform_int(1, 1000));
          break;
        case 1: {
          AffinePoint k = t.key;
          while (k == t.key) k = ecc::scalar_mul(rng.uniform_int(1, toy.n - 1), toy.g, toy);
          t.key = k;
          break;
        }
        case 2:
          t.expires_at += static_cast<double>(rng.uniform_int(1, 1000));
          break;
        case 3:
          t.signature.challenge ^= rng.uniform_int(1, ~std::uint64_t{0});
          break;
        default:
          t.signature.response = (t.signature.response + rng.uniform_int(1, toy.n - 1)) % toy.n;
          break;
      }
      if (keying::verify_record(t, toy)) ++accepted;
    }
    out.push_back({"single-field tampering is rejected (" + std::to_string(tamper_cases) +
                       " cases)",
                   accepted == 0, std::to_string(accepted) + " tampered records accepted"});
  }

  if (include_demo) {
    const CurveParams demo = CurveParams::demo();
    Check c{"demo curve validates and its order matches enumeration", true, ""};
    try {
      demo.validate();
      const auto count = count_points(demo);
      c.passed = count == demo.n * demo.h;
      c.detail = "counted " + std::to_string(count);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = e.what();
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace fanetkm::selftest
