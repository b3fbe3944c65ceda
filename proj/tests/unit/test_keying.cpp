#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fanetkm/errors.hpp"
#include "fanetkm/keying.hpp"

using namespace fanetkm;
using namespace fanetkm::keying;

namespace {

const ecc::CurveParams kToy = ecc::CurveParams::toy();

PublicKeyRecord rec(NodeId owner, Seconds expires_at, ecc::Scalar priv = 3) {
  RandomStream rng(owner * 31 + 7);
  const auto kp = keypair_from_private(kToy, priv, 0.0, expires_at);
  return make_record(kp, owner, kToy, rng);
}

void check_table_invariants(const KeyTable& t) {
  if (t.capacity()) REQUIRE(t.size() <= *t.capacity());
  const auto e = t.entries();
  for (std::size_t i = 1; i < e.size(); ++i) REQUIRE(e[i - 1].record.owner < e[i].record.owner);
  if (t.strategy().kind == StrategyKind::Hybrid) {
    REQUIRE(t.count(Partition::Part1) <= t.strategy().k1);
    REQUIRE(t.count(Partition::Part2) <= t.strategy().k2);
  }
}

}  // namespace

TEST_CASE("keypair from a fixed private scalar") {
  CHECK(keypair_from_private(kToy, 1, 0, 10).pub == kToy.g);
  CHECK(keypair_from_private(kToy, 2, 0, 10).pub == ecc::AffinePoint::at(6, 3));
  CHECK_THROWS_AS(keypair_from_private(kToy, 0, 0, 10), DomainError);
  CHECK_THROWS_AS(keypair_from_private(kToy, 19, 0, 10), DomainError);
  CHECK_THROWS_AS(keypair_from_private(kToy, 1, 0, 0), DomainError);
}

TEST_CASE("keygen never emits a zero scalar") {
  RandomStream rng(1);
  for (int i = 0; i < 2000; ++i) {
    const auto kp = keygen(kToy, rng, 5.0, 10.0);
    REQUIRE(kp.priv >= 1);
    REQUIRE(kp.priv <= 18);
    REQUIRE(kp.pub == ecc::scalar_mul(kp.priv, kToy.g, kToy));
    REQUIRE(kp.expires_at == 15.0);
    REQUIRE(kp.issued_at == 5.0);
  }
}

TEST_CASE("rotate_if_expired") {
  RandomStream rng(9);
  const auto forever = keygen(kToy, rng, 0, kNever);
  CHECK(rotate_if_expired(forever, kToy, rng, 1e12, kNever) == forever);

  const auto kp = keypair_from_private(kToy, 5, 0, 100);
  CHECK(rotate_if_expired(kp, kToy, rng, 99.9, 100) == kp);
  const auto fresh = rotate_if_expired(kp, kToy, rng, 100, 100);
  CHECK(fresh.expires_at == 200.0);
  CHECK(fresh.issued_at == 100.0);
}

TEST_CASE("canonical encoding is big-endian") {
  const auto bytes = encode_record(0x01020304, ecc::AffinePoint::at(5, 1), 1.5);
  CHECK(bytes[4] == 0x01);
  CHECK(bytes[7] == 0x04);
  CHECK(bytes[15] == 5);
  CHECK(bytes[23] == 1);
  CHECK(bytes[31] == 0xdc);  // 1500 = 0x05dc
  CHECK(bytes[30] == 0x05);
  CHECK(expires_millis(kNever) == std::numeric_limits<std::int64_t>::max());
}

TEST_CASE("sign and verify") {
  const auto r = rec(4, 120);
  CHECK(verify_record(r, kToy));

  auto later = r;
  later.expires_at += 1;
  CHECK_FALSE(verify_record(later, kToy));

  auto other_owner = r;
  other_owner.owner = 5;
  CHECK_FALSE(verify_record(other_owner, kToy));

  auto swapped = r;
  swapped.key = rec(4, 120, 7).key;
  CHECK_FALSE(verify_record(swapped, kToy));
}

TEST_CASE("the digest is pluggable") {
  const Digest constant = [](std::span<const std::uint8_t>) { return std::uint64_t{42}; };
  RandomStream rng(3);
  const auto kp = keypair_from_private(kToy, 4, 0, 50);
  const auto r = make_record(kp, 1, kToy, rng, constant);
  CHECK(verify_record(r, kToy, constant));
  CHECK_FALSE(verify_record(r, kToy));
}

TEST_CASE("signing is deterministic given the stream") {
  const auto kp = keypair_from_private(kToy, 4, 0, 50);
  RandomStream a(77), b(77);
  CHECK(make_record(kp, 1, kToy, a) == make_record(kp, 1, kToy, b));
}

TEST_CASE("single-field tampering is rejected") {
  RandomStream rng(123);
  int tampered = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto kp = keygen(kToy, rng, 0, rng.uniform(1, 500));
    const auto r = make_record(kp, static_cast<NodeId>(rng.uniform_int(0, 99)), kToy, rng);
    REQUIRE(verify_record(r, kToy));
    auto t = r;
    switch (i % 5) {
      case 0:
        t.owner ^= 1u << rng.uniform_int(0, 31);
        break;
      case 1: {
        auto k = t.key;
        while (k == t.key) k = ecc::scalar_mul(rng.uniform_int(1, 18), kToy.g, kToy);
        t.key = k;
        break;
      }
      case 2:
        t.expires_at += 0.001 * static_cast<double>(rng.uniform_int(1, 100000));
        break;
      case 3:
        t.signature.challenge ^= std::uint64_t{1} << rng.uniform_int(0, 63);
        break;
      default:
        t.signature.response = (t.signature.response + rng.uniform_int(1, 18)) % kToy.n;
        break;
    }
    ++tampered;
    REQUIRE_FALSE(verify_record(t, kToy));
  }
  CHECK(tampered == 1000);
}

TEST_CASE("record verifier caches verdicts") {
  RecordVerifier v(kToy);
  const auto r = rec(2, 50);
  CHECK(v(r));
  CHECK(v(r));
  CHECK(v.verifications() == 1);
  auto bad = r;
  bad.expires_at = 51;
  CHECK_FALSE(v(bad));
  CHECK_FALSE(v(bad));
  CHECK(v.verifications() == 2);
}

TEST_CASE("insert into a free slot") {
  KeyTable t(2);
  CHECK(t.insert(rec(3, 120), 10).status == InsertStatus::Stored);
}

TEST_CASE("freshest replace evicts the closest expiry") {
  KeyTable t(2, Strategy::freshest());
  t.insert(rec(1, 50), 0);
  t.insert(rec(2, 80), 0);
  const auto out = t.insert(rec(3, 120), 10);
  CHECK(out.status == InsertStatus::Replaced);
  CHECK(out.evicted == NodeId{1});
  CHECK(t.find(1) == nullptr);
  CHECK(t.find(3) != nullptr);
}

TEST_CASE("expired-only replace waits for expiry") {
  KeyTable t(2, Strategy::expired_only());
  t.insert(rec(1, 50), 0);
  t.insert(rec(2, 80), 0);
  CHECK(t.insert(rec(3, 120), 10).status == InsertStatus::Discarded);
  const auto out = t.insert(rec(3, 120), 60);
  CHECK(out.status == InsertStatus::Replaced);
  CHECK(out.evicted == NodeId{1});
}

TEST_CASE("a record from a stored owner refreshes in place") {
  for (auto s : {Strategy::freshest(), Strategy::expired_only()}) {
    KeyTable t(2, s);
    t.insert(rec(1, 50), 0);
    t.insert(rec(2, 80), 0);
    const auto out = t.insert(rec(1, 150, 5), 10);
    CHECK(out.status == InsertStatus::RefreshedOwn);
    CHECK(t.size() == 2);
    CHECK(t.find(1)->expires_at == 150.0);
  }
}

TEST_CASE("expired records are rejected") {
  KeyTable t(2);
  CHECK_THROWS_AS(t.insert(rec(1, 50), 50), RejectedInputError);
  RecordVerifier v(kToy);
  auto forged = rec(1, 100);
  forged.owner = 2;
  CHECK_THROWS_AS(table_insert(t, forged, 0, v), RejectedInputError);
  CHECK(t.size() == 0);
}

TEST_CASE("hybrid requires a matching capacity") {
  CHECK_THROWS_AS(KeyTable(10, Strategy::hybrid(5, 4)), ConfigError);
  CHECK_NOTHROW(KeyTable(10, Strategy::hybrid(5, 5)));
}

TEST_CASE("hybrid fills part 2 first, then part 1, then replaces") {
  KeyTable t(3, Strategy::hybrid(2, 1));
  t.insert(rec(1, 50), 0);
  CHECK(t.entry(1)->part == Partition::Part2);
  t.insert(rec(2, 60), 0);
  t.insert(rec(3, 70), 0);
  CHECK(t.count(Partition::Part1) == 2);
  CHECK(t.count(Partition::Part2) == 1);
  // Part 2 holds owner 1 (unexpired at 10), so part 1's min expiry goes.
  auto out = t.insert(rec(4, 200), 10);
  CHECK(out.status == InsertStatus::Replaced);
  CHECK(out.evicted == NodeId{2});
  // Once owner 1 expires, part 2's expired slot is preferred.
  out = t.insert(rec(5, 300), 55);
  CHECK(out.status == InsertStatus::Replaced);
  CHECK(out.evicted == NodeId{1});
  CHECK(t.entry(5)->part == Partition::Part2);
}

TEST_CASE("purge_expired") {
  KeyTable empty;
  CHECK(empty.purge_expired(0) == 0);
  KeyTable a;
  a.insert(rec(1, 50), 0);
  CHECK(a.purge_expired(50) == 1);
  KeyTable b;
  b.insert(rec(1, 50), 0);
  b.insert(rec(2, 80), 0);
  CHECK(b.purge_expired(60) == 1);
  CHECK(b.find(2) != nullptr);
}

TEST_CASE("exchange") {
  RecordVerifier v(kToy);
  KeyTable ti(1), tj(1);
  const auto ri = rec(1, 100), rj = rec(2, 100);
  auto out = exchange(ti, tj, ri, rj, 0, v);
  CHECK(out.first.status == InsertStatus::Stored);
  CHECK(out.second.status == InsertStatus::Stored);
  out = exchange(ti, tj, ri, rj, 1, v);
  CHECK(out.first.status == InsertStatus::RefreshedOwn);

  KeyTable full(1, Strategy::expired_only()), fresh(1, Strategy::expired_only());
  full.insert(rec(9, 500), 0);
  out = exchange(fresh, full, ri, rj, 0, v);
  CHECK(out.first.status == InsertStatus::Stored);
  CHECK(out.second.status == InsertStatus::Discarded);

  KeyTable x(1), y(1);
  auto forged = rj;
  forged.expires_at = 99;
  CHECK_THROWS_AS(exchange(x, y, ri, forged, 0, v), RejectedInputError);
  CHECK(x.size() == 0);
  CHECK(y.size() == 0);
}

TEST_CASE("random insert sequences keep the table invariants") {
  RandomStream rng(55);
  for (auto strategy : {Strategy::freshest(), Strategy::expired_only(), Strategy::hybrid(3, 2)}) {
    KeyTable t(5, strategy);
    Seconds now = 0;
    for (int i = 0; i < 5000; ++i) {
      now += rng.uniform(0, 2);
      const auto owner = static_cast<NodeId>(rng.uniform_int(0, 19));
      const Seconds exp = now + rng.uniform(0.5, 60);
      std::vector<TableEntry> before(t.entries().begin(), t.entries().end());
      const auto out = t.insert(rec(owner, exp), now);
      check_table_invariants(t);
      if (out.status == InsertStatus::Replaced) {
        const auto victim = std::find_if(before.begin(), before.end(), [&](const TableEntry& e) {
          return e.record.owner == *out.evicted;
        });
        REQUIRE(victim != before.end());
        if (strategy.kind == StrategyKind::FreshestReplace) {
          for (const auto& e : t.entries()) {
            if (e.record.owner != owner) REQUIRE(victim->record.expires_at <= e.record.expires_at);
          }
        }
        if (strategy.kind == StrategyKind::ExpiredOnlyReplace) {
          REQUIRE(victim->record.expires_at <= now);
        }
      }
      if (rng.uniform(0, 1) < 0.05) t.purge_expired(now);
    }
  }
}
