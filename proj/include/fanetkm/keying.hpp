#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "fanetkm/ecc.hpp"
#include "fanetkm/random.hpp"
#include "fanetkm/types.hpp"

namespace fanetkm::keying {

// Validity convention used throughout: a key or record is valid at `now`
// iff now < expires_at.

struct KeyPair {
  ecc::Scalar priv = 0;
  ecc::AffinePoint pub;
  Seconds issued_at = 0.0;
  Seconds expires_at = kNever;

  bool valid_at(Seconds now) const { return now < expires_at; }
  friend bool operator==(const KeyPair&, const KeyPair&) = default;
};

/// Schnorr signature: challenge e = H(R || message) kept at full digest
/// width, response s = k + (e mod n) * priv mod n.
struct Signature {
  std::uint64_t challenge = 0;
  ecc::Scalar response = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct PublicKeyRecord {
  NodeId owner = 0;
  ecc::AffinePoint key;
  Seconds expires_at = kNever;
  Signature signature;

  bool valid_at(Seconds now) const { return now < expires_at; }
  friend bool operator==(const PublicKeyRecord&, const PublicKeyRecord&) = default;
};

using Digest = std::function<std::uint64_t(std::span<const std::uint8_t>)>;

/// 64-bit FNV-1a. Non-cryptographic; the default digest.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

/// Expiry in integer milliseconds; +inf maps to INT64_MAX.
std::int64_t expires_millis(Seconds expires_at);

inline constexpr std::size_t kRecordEncodingSize = 32;

/// Canonical signing bytes: big-endian u64 owner, u64 key.x, u64 key.y,
/// i64 expires_at in milliseconds.
std::array<std::uint8_t, kRecordEncodingSize> encode_record(NodeId owner,
                                                            const ecc::AffinePoint& key,
                                                            Seconds expires_at);

/// Key pair for a given private scalar. Throws DomainError unless
/// priv is in [1, n-1] and ttl > 0.
KeyPair keypair_from_private(const ecc::CurveParams& curve, ecc::Scalar priv, Seconds now,
                             Seconds ttl);

/// Private scalar drawn uniformly in [1, n-1]; a zero draw is rejected and redrawn.
KeyPair keygen(const ecc::CurveParams& curve, RandomStream& rng, Seconds now, Seconds ttl);

/// Fresh pair once now >= kp.expires_at, otherwise kp unchanged.
KeyPair rotate_if_expired(const KeyPair& kp, const ecc::CurveParams& curve, RandomStream& rng,
                          Seconds now, Seconds ttl);

Signature sign_record(const KeyPair& kp, NodeId owner, const ecc::AffinePoint& key,
                      Seconds expires_at, const ecc::CurveParams& curve, RandomStream& rng,
                      const Digest& digest = fnv1a64);

/// Signs (owner, kp.pub, kp.expires_at) and packages the record.
PublicKeyRecord make_record(const KeyPair& kp, NodeId owner, const ecc::CurveParams& curve,
                            RandomStream& rng, const Digest& digest = fnv1a64);

bool verify_record(const PublicKeyRecord& rec, const ecc::CurveParams& curve,
                   const Digest& digest = fnv1a64);

/// Memoizing verifier. A record is immutable, so its verdict is cached by
/// value for the lifetime of the verifier.
class RecordVerifier {
 public:
  explicit RecordVerifier(ecc::CurveParams curve, Digest digest = fnv1a64)
      : curve_(curve), digest_(std::move(digest)) {}

  bool operator()(const PublicKeyRecord& rec);

  const ecc::CurveParams& curve() const { return curve_; }
  std::size_t verifications() const { return verifications_; }

 private:
  using Key = std::tuple<NodeId, std::uint64_t, std::uint64_t, bool, std::int64_t, std::uint64_t,
                         std::uint64_t>;
  ecc::CurveParams curve_;
  Digest digest_;
  std::set<Key> accepted_;
  std::set<Key> rejected_;
  std::size_t verifications_ = 0;
};

// --- key tables -----------------------------------------------------------

enum class StrategyKind { FreshestReplace, ExpiredOnlyReplace, Hybrid };

struct Strategy {
  StrategyKind kind = StrategyKind::FreshestReplace;
  /// Hybrid only: part-1 (freshest-replace) and part-2 (expired-only) slots.
  std::size_t k1 = 0;
  std::size_t k2 = 0;

  static Strategy freshest() { return {StrategyKind::FreshestReplace, 0, 0}; }
  static Strategy expired_only() { return {StrategyKind::ExpiredOnlyReplace, 0, 0}; }
  static Strategy hybrid(std::size_t k1, std::size_t k2) { return {StrategyKind::Hybrid, k1, k2}; }

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

enum class Partition : std::uint8_t { Part1, Part2 };

struct TableEntry {
  PublicKeyRecord record;
  Seconds stored_at = 0.0;
  Partition part = Partition::Part1;
};

enum class InsertStatus { Stored, Replaced, RefreshedOwn, Discarded };

struct InsertOutcome {
  InsertStatus status = InsertStatus::Discarded;
  /// Owner of the evicted entry when status == Replaced.
  std::optional<NodeId> evicted;

  friend bool operator==(const InsertOutcome&, const InsertOutcome&) = default;
};

/// Bounded store of other nodes' key records. The owning node's own key
/// pair is kept elsewhere and never occupies a slot.
class KeyTable {
 public:
  /// capacity == nullopt means unlimited. Hybrid requires capacity == k1 + k2.
  explicit KeyTable(std::optional<std::size_t> capacity = std::nullopt,
                    Strategy strategy = Strategy::freshest());

  /// Applies the replacement policy. The caller guarantees the signature
  /// was verified; throws RejectedInputError if rec is expired at now.
  InsertOutcome insert(const PublicKeyRecord& rec, Seconds now);

  /// Removes every entry with expires_at <= now.
  std::size_t purge_expired(Seconds now);

  const PublicKeyRecord* find(NodeId owner) const;
  const TableEntry* entry(NodeId owner) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t count(Partition part) const;
  std::optional<std::size_t> capacity() const { return capacity_; }
  const Strategy& strategy() const { return strategy_; }
  /// Entries sorted by owner.
  std::span<const TableEntry> entries() const { return entries_; }

 private:
  std::size_t part_capacity(Partition part) const;
  std::vector<TableEntry>::iterator lower(NodeId owner);
  /// Index of the eviction victim in `part` among entries matching `pred`.
  template <typename Pred>
  std::optional<std::size_t> victim(Pred pred) const;
  InsertOutcome replace_at(std::size_t idx, const PublicKeyRecord& rec, Seconds now, Partition part);
  InsertOutcome store(const PublicKeyRecord& rec, Seconds now, Partition part);

  std::optional<std::size_t> capacity_;
  Strategy strategy_;
  std::vector<TableEntry> entries_;
};

/// Verifies rec, then inserts. Throws RejectedInputError for expired or
/// unverifiable records.
InsertOutcome table_insert(KeyTable& table, const PublicKeyRecord& rec, Seconds now,
                           RecordVerifier& verifier);

/// Mutual key exchange on contact: table_i receives rec_j and table_j
/// receives rec_i. Both records are checked before either table changes.
std::pair<InsertOutcome, InsertOutcome> exchange(KeyTable& table_i, KeyTable& table_j,
                                                 const PublicKeyRecord& rec_i,
                                                 const PublicKeyRecord& rec_j, Seconds now,
                                                 RecordVerifier& verifier);

}  // namespace fanetkm::keying
