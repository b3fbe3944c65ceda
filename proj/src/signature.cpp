#include <cmath>
#include <limits>

#include "fanetkm/errors.hpp"
#include "fanetkm/keying.hpp"

namespace fanetkm::keying {

namespace {

void put_be64(std::uint8_t* out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
}

std::uint64_t challenge_for(const ecc::AffinePoint& commitment,
                            const std::array<std::uint8_t, kRecordEncodingSize>& message,
                            const Digest& digest) {
  std::array<std::uint8_t, 16 + kRecordEncodingSize> buf{};
  put_be64(buf.data(), commitment.x);
  put_be64(buf.data() + 8, commitment.y);
  std::copy(message.begin(), message.end(), buf.begin() + 16);
  return digest(buf);
}

}  // namespace

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t byte : bytes) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::int64_t expires_millis(Seconds expires_at) {
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
  if (std::isnan(expires_at)) return kMin;
  const double ms = std::round(expires_at * 1000.0);
  if (ms >= 9.2e18) return kMax;
  if (ms <= -9.2e18) return kMin;
  return static_cast<std::int64_t>(ms);
}

std::array<std::uint8_t, kRecordEncodingSize> encode_record(NodeId owner,
                                                            const ecc::AffinePoint& key,
                                                            Seconds expires_at) {
  std::array<std::uint8_t, kRecordEncodingSize> out{};
  put_be64(out.data(), owner);
  put_be64(out.data() + 8, key.x);
  put_be64(out.data() + 16, key.y);
  put_be64(out.data() + 24, static_cast<std::uint64_t>(expires_millis(expires_at)));
  return out;
}

KeyPair keypair_from_private(const ecc::CurveParams& curve, ecc::Scalar priv, Seconds now,
                             Seconds ttl) {
  if (priv == 0 || priv >= curve.n) {
    throw DomainError("keygen: private key must lie in [1, n-1]");
  }
  if (!(ttl > 0.0)) throw DomainError("keygen: ttl must be > 0");
  KeyPair kp;
  kp.priv = priv;
  kp.pub = ecc::scalar_mul(priv, curve.g, curve);
  kp.issued_at = now;
  kp.expires_at = now + ttl;
  return kp;
}

KeyPair keygen(const ecc::CurveParams& curve, RandomStream& rng, Seconds now, Seconds ttl) {
  ecc::Scalar priv = 0;
  while (priv == 0) priv = rng.uniform_int(0, curve.n - 1);
  return keypair_from_private(curve, priv, now, ttl);
}

KeyPair rotate_if_expired(const KeyPair& kp, const ecc::CurveParams& curve, RandomStream& rng,
                          Seconds now, Seconds ttl) {
  if (now >= kp.expires_at) return keygen(curve, rng, now, ttl);
  return kp;
}

Signature sign_record(const KeyPair& kp, NodeId owner, const ecc::AffinePoint& key,
                      Seconds expires_at, const ecc::CurveParams& curve, RandomStream& rng,
                      const Digest& digest) {
  const auto message = encode_record(owner, key, expires_at);
  const ecc::Scalar nonce = rng.uniform_int(1, curve.n - 1);
  const ecc::AffinePoint commitment = ecc::scalar_mul(nonce, curve.g, curve);
  Signature sig;
  sig.challenge = challenge_for(commitment, message, digest);
  const ecc::Scalar e = sig.challenge % curve.n;
  sig.response = (nonce + ecc::mul_mod(e, kp.priv % curve.n, curve.n)) % curve.n;
  return sig;
}

PublicKeyRecord make_record(const KeyPair& kp, NodeId owner, const ecc::CurveParams& curve,
                            RandomStream& rng, const Digest& digest) {
  PublicKeyRecord rec;
  rec.owner = owner;
  rec.key = kp.pub;
  rec.expires_at = kp.expires_at;
  rec.signature = sign_record(kp, owner, kp.pub, kp.expires_at, curve, rng, digest);
  return rec;
}

bool verify_record(const PublicKeyRecord& rec, const ecc::CurveParams& curve,
                   const Digest& digest) {
  if (rec.key.infinity || !curve.contains(rec.key)) return false;
  if (rec.signature.response >= curve.n) return false;
  const ecc::Scalar e = rec.signature.challenge % curve.n;
  // R' = s*G - e*Y equals the signer's commitment iff the key matches.
  const ecc::AffinePoint sg = ecc::scalar_mul(rec.signature.response, curve.g, curve);
  const ecc::AffinePoint ey = ecc::scalar_mul(e, rec.key, curve);
  const ecc::AffinePoint commitment = ecc::point_add(sg, ecc::negate(ey, curve), curve);
  if (commitment.infinity) return false;
  const auto message = encode_record(rec.owner, rec.key, rec.expires_at);
  return challenge_for(commitment, message, digest) == rec.signature.challenge;
}

bool RecordVerifier::operator()(const PublicKeyRecord& rec) {
  const Key key{rec.owner,
                rec.key.x,
                rec.key.y,
                rec.key.infinity,
                expires_millis(rec.expires_at),
                rec.signature.challenge,
                rec.signature.response};
  // The verdict depends only on the fields captured in the key.
  if (accepted_.contains(key)) return true;
  if (rejected_.contains(key)) return false;
  ++verifications_;
  const bool ok = verify_record(rec, curve_, digest_);
  (ok ? accepted_ : rejected_).insert(key);
  return ok;
}

}  // namespace fanetkm::keying
