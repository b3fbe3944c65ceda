#pragma once

// Short Weierstrass curves y^2 = x^3 + ax + b over prime fields below 2^63.
// Affine coordinates, variable time. A faithful demonstrator of the key
// generation arithmetic, not a hardened implementation.

#include <cstdint>

namespace fanetkm::ecc {

using Scalar = std::uint64_t;

struct AffinePoint {
  std::uint64_t x = 0;
  std::uint64_t y = 0;
  bool infinity = true;

  static constexpr AffinePoint identity() { return {}; }
  static constexpr AffinePoint at(std::uint64_t x, std::uint64_t y) { return {x, y, false}; }

  friend constexpr bool operator==(const AffinePoint&, const AffinePoint&) = default;
};

struct CurveParams {
  std::uint64_t p = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  AffinePoint g;
  /// Order of g.
  std::uint64_t n = 0;
  /// |E(F_p)| / n. Carried for completeness; nothing depends on it.
  std::uint64_t h = 1;

  /// y^2 = x^3 + 2x + 2 over F_17, G = (5, 1), n = 19.
  static CurveParams toy();
  /// Prime-order curve over a 24-bit field, used by the simulator.
  static CurveParams demo();

  bool contains(const AffinePoint& pt) const;
  /// Checks p prime and > 3, nonsingular, G on curve, n prime and n*G = O.
  /// Throws DomainError naming the failed condition.
  void validate() const;

  friend bool operator==(const CurveParams&, const CurveParams&) = default;
};

bool is_prime(std::uint64_t v);

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
/// Inverse of a modulo m; a must be coprime to m.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);

AffinePoint negate(const AffinePoint& pt, const CurveParams& curve);

/// Group law. Throws DomainError if either input is off the curve.
AffinePoint point_add(const AffinePoint& p, const AffinePoint& q, const CurveParams& curve);

/// s*P by left-to-right double-and-add. Throws DomainError if P is off the curve.
AffinePoint scalar_mul(Scalar s, const AffinePoint& pt, const CurveParams& curve);

}  // namespace fanetkm::ecc
