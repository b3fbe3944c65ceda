#include <algorithm>
#include <string>
#include <tuple>

#include "fanetkm/errors.hpp"
#include "fanetkm/keying.hpp"

namespace fanetkm::keying {

KeyTable::KeyTable(std::optional<std::size_t> capacity, Strategy strategy)
    : capacity_(capacity), strategy_(strategy) {
  if (strategy_.kind == StrategyKind::Hybrid) {
    if (!capacity_ || *capacity_ != strategy_.k1 + strategy_.k2) {
      throw ConfigError("keying.capacity: hybrid strategy requires capacity == k1 + k2");
    }
  }
}

std::vector<TableEntry>::iterator KeyTable::lower(NodeId owner) {
  return std::lower_bound(entries_.begin(), entries_.end(), owner,
                          [](const TableEntry& e, NodeId o) { return e.record.owner < o; });
}

const TableEntry* KeyTable::entry(NodeId owner) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), owner,
                             [](const TableEntry& e, NodeId o) { return e.record.owner < o; });
  if (it == entries_.end() || it->record.owner != owner) return nullptr;
  return &*it;
}

const PublicKeyRecord* KeyTable::find(NodeId owner) const {
  const TableEntry* e = entry(owner);
  return e ? &e->record : nullptr;
}

std::size_t KeyTable::count(Partition part) const {
  return static_cast<std::size_t>(std::count_if(
      entries_.begin(), entries_.end(), [part](const TableEntry& e) { return e.part == part; }));
}

std::size_t KeyTable::part_capacity(Partition part) const {
  return part == Partition::Part1 ? strategy_.k1 : strategy_.k2;
}

// Victim order: earliest expiry, then earliest receipt, then lowest owner.
template <typename Pred>
std::optional<std::size_t> KeyTable::victim(Pred pred) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const TableEntry& e = entries_[i];
    if (!pred(e)) continue;
    if (!best) {
      best = i;
      continue;
    }
    const TableEntry& b = entries_[*best];
    if (std::tie(e.record.expires_at, e.stored_at, e.record.owner) <
        std::tie(b.record.expires_at, b.stored_at, b.record.owner)) {
      best = i;
    }
  }
  return best;
}

InsertOutcome KeyTable::store(const PublicKeyRecord& rec, Seconds now, Partition part) {
  entries_.insert(lower(rec.owner), TableEntry{rec, now, part});
  return {InsertStatus::Stored, std::nullopt};
}

InsertOutcome KeyTable::replace_at(std::size_t idx, const PublicKeyRecord& rec, Seconds now,
                                   Partition part) {
  const NodeId evicted = entries_[idx].record.owner;
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(idx));
  entries_.insert(lower(rec.owner), TableEntry{rec, now, part});
  return {InsertStatus::Replaced, evicted};
}

InsertOutcome KeyTable::insert(const PublicKeyRecord& rec, Seconds now) {
  if (!rec.valid_at(now)) {
    throw RejectedInputError("table_insert: record of node " + std::to_string(rec.owner) +
                             " is expired");
  }

  if (auto it = lower(rec.owner); it != entries_.end() && it->record.owner == rec.owner) {
    it->record = rec;
    it->stored_at = now;
    return {InsertStatus::RefreshedOwn, std::nullopt};
  }

  if (!capacity_) return store(rec, now, Partition::Part1);

  const auto expired = [now](const TableEntry& e) { return !e.record.valid_at(now); };
  const auto any = [](const TableEntry&) { return true; };

  switch (strategy_.kind) {
    case StrategyKind::FreshestReplace: {
      if (entries_.size() < *capacity_) return store(rec, now, Partition::Part1);
      if (auto v = victim(any)) return replace_at(*v, rec, now, Partition::Part1);
      return {InsertStatus::Discarded, std::nullopt};
    }
    case StrategyKind::ExpiredOnlyReplace: {
      if (entries_.size() < *capacity_) return store(rec, now, Partition::Part1);
      if (auto v = victim(expired)) return replace_at(*v, rec, now, Partition::Part1);
      return {InsertStatus::Discarded, std::nullopt};
    }
    case StrategyKind::Hybrid: {
      if (count(Partition::Part2) < part_capacity(Partition::Part2)) {
        return store(rec, now, Partition::Part2);
      }
      if (count(Partition::Part1) < part_capacity(Partition::Part1)) {
        return store(rec, now, Partition::Part1);
      }
      if (auto v = victim([&](const TableEntry& e) {
            return e.part == Partition::Part2 && expired(e);
          })) {
        return replace_at(*v, rec, now, Partition::Part2);
      }
      if (auto v = victim([](const TableEntry& e) { return e.part == Partition::Part1; })) {
        return replace_at(*v, rec, now, Partition::Part1);
      }
      return {InsertStatus::Discarded, std::nullopt};
    }
  }
  return {InsertStatus::Discarded, std::nullopt};
}

std::size_t KeyTable::purge_expired(Seconds now) {
  const auto before = entries_.size();
  std::erase_if(entries_, [now](const TableEntry& e) { return !e.record.valid_at(now); });
  return before - entries_.size();
}

namespace {

void check_acceptable(const PublicKeyRecord& rec, Seconds now, RecordVerifier& verifier) {
  if (!rec.valid_at(now)) {
    throw RejectedInputError("table_insert: record of node " + std::to_string(rec.owner) +
                             " is expired");
  }
  if (!verifier(rec)) {
    throw RejectedInputError("table_insert: signature of node " + std::to_string(rec.owner) +
                             " does not verify");
  }
}

}  // namespace

InsertOutcome table_insert(KeyTable& table, const PublicKeyRecord& rec, Seconds now,
                           RecordVerifier& verifier) {
  check_acceptable(rec, now, verifier);
  return table.insert(rec, now);
}

std::pair<InsertOutcome, InsertOutcome> exchange(KeyTable& table_i, KeyTable& table_j,
                                                 const PublicKeyRecord& rec_i,
                                                 const PublicKeyRecord& rec_j, Seconds now,
                                                 RecordVerifier& verifier) {
  check_acceptable(rec_i, now, verifier);
  check_acceptable(rec_j, now, verifier);
  InsertOutcome to_i = table_i.insert(rec_j, now);
  InsertOutcome to_j = table_j.insert(rec_i, now);
  return {to_i, to_j};
}

}  // namespace fanetkm::keying
