#include "fanetkm/ecc.hpp"

#include <bit>

#include "fanetkm/errors.hpp"

namespace fanetkm::ecc {

namespace {

using u128 = unsigned __int128;

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  const std::uint64_t s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

// Group law on points already known to lie on the curve.
AffinePoint add_unchecked(const AffinePoint& p, const AffinePoint& q, const CurveParams& c) {
  if (p.infinity) return q;
  if (q.infinity) return p;
  const std::uint64_t m = c.p;
  std::uint64_t lambda = 0;
  if (p.x == q.x) {
    if (add_mod(p.y, q.y, m) == 0) return AffinePoint::identity();
    // tangent: (3x^2 + a) / 2y
    const std::uint64_t num = add_mod(mul_mod(3, mul_mod(p.x, p.x, m), m), c.a % m, m);
    lambda = mul_mod(num, inv_mod(add_mod(p.y, p.y, m), m), m);
  } else {
    lambda = mul_mod(sub_mod(q.y, p.y, m), inv_mod(sub_mod(q.x, p.x, m), m), m);
  }
  const std::uint64_t x3 = sub_mod(sub_mod(mul_mod(lambda, lambda, m), p.x, m), q.x, m);
  const std::uint64_t y3 = sub_mod(mul_mod(lambda, sub_mod(p.x, x3, m), m), p.y, m);
  return AffinePoint::at(x3, y3);
}

}  // namespace

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
  // Extended Euclid on signed 128-bit to keep the cofactors exact.
  __int128 t = 0, new_t = 1;
  __int128 r = m, new_r = a % m;
  while (new_r != 0) {
    const __int128 q = r / new_r;
    const __int128 tt = t - q * new_t;
    t = new_t;
    new_t = tt;
    const __int128 rr = r - q * new_r;
    r = new_r;
    new_r = rr;
  }
  if (r != 1) throw DomainError("inv_mod: value is not invertible");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

bool is_prime(std::uint64_t v) {
  if (v < 2) return false;
  for (std::uint64_t sp : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                           37ULL}) {
    if (v % sp == 0) return v == sp;
  }
  std::uint64_t d = v - 1;
  const int s = std::countr_zero(d);
  d >>= s;
  // Deterministic Miller-Rabin witnesses for all 64-bit inputs.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                          37ULL}) {
    std::uint64_t x = pow_mod(a, d, v);
    if (x == 1 || x == v - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, v);
      if (x == v - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

CurveParams CurveParams::toy() {
  CurveParams c;
  c.p = 17;
  c.a = 2;
  c.b = 2;
  c.g = AffinePoint::at(5, 1);
  c.n = 19;
  c.h = 1;
  return c;
}

CurveParams CurveParams::demo() {
  CurveParams c;
  c.p = 16'777'213;
  c.a = 1;
  c.b = 11;
  c.g = AffinePoint::at(4, 830'842);
  c.n = 16'781'357;
  c.h = 1;
  return c;
}

bool CurveParams::contains(const AffinePoint& pt) const {
  if (pt.infinity) return true;
  if (pt.x >= p || pt.y >= p) return false;
  const std::uint64_t lhs = mul_mod(pt.y, pt.y, p);
  const std::uint64_t x3 = mul_mod(mul_mod(pt.x, pt.x, p), pt.x, p);
  const std::uint64_t rhs = add_mod(add_mod(x3, mul_mod(a % p, pt.x, p), p), b % p, p);
  return lhs == rhs;
}

void CurveParams::validate() const {
  if (p <= 3 || p >= (1ULL << 63) || !is_prime(p)) {
    throw DomainError("curve: p must be a prime in (3, 2^63)");
  }
  const std::uint64_t a3 = pow_mod(a, 3, p);
  const std::uint64_t disc = add_mod(mul_mod(4, a3, p), mul_mod(27, mul_mod(b % p, b % p, p), p), p);
  if (disc == 0) throw DomainError("curve: singular (4a^3 + 27b^2 = 0 mod p)");
  if (g.infinity || !contains(g)) throw DomainError("curve: base point is not on the curve");
  if (!is_prime(n)) throw DomainError("curve: order n must be prime");
  if (!scalar_mul(n, g, *this).infinity) throw DomainError("curve: n*G is not the identity");
}

AffinePoint negate(const AffinePoint& pt, const CurveParams& curve) {
  if (pt.infinity || pt.y == 0) return pt;
  return AffinePoint::at(pt.x, curve.p - pt.y);
}

AffinePoint point_add(const AffinePoint& p, const AffinePoint& q, const CurveParams& curve) {
  if (!curve.contains(p) || !curve.contains(q)) {
    throw DomainError("point_add: input point is not on the curve");
  }
  return add_unchecked(p, q, curve);
}

AffinePoint scalar_mul(Scalar s, const AffinePoint& pt, const CurveParams& curve) {
  if (!curve.contains(pt)) throw DomainError("scalar_mul: input point is not on the curve");
  AffinePoint acc = AffinePoint::identity();
  for (int bit = 63 - std::countl_zero(s | 1); bit >= 0 && s != 0; --bit) {
    acc = add_unchecked(acc, acc, curve);
    if ((s >> bit) & 1) acc = add_unchecked(acc, pt, curve);
  }
  return acc;
}

}  // namespace fanetkm::ecc
