#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>

namespace semcache {

// Simulation time in milliseconds.
using SimTime = double;

enum class Origin : std::uint8_t { kDemand, kPrefetch };
enum class Replacement : std::uint8_t { kLru, kFifo };

std::string_view to_string(Origin o);
std::string_view to_string(Replacement r);
bool parse_replacement(std::string_view text, Replacement& out);

struct CacheEntry {
  std::string key;
  std::uint64_t size = 0;
  Origin origin = Origin::kDemand;
  SimTime inserted_at = 0;
  SimTime last_access = 0;
  std::uint64_t hit_count = 0;
  // Set while a prefetched entry has not yet been served to anyone.
  bool unused_prefetch = false;
};

struct CacheStats {
  std::uint64_t capacity = 0;
  std::uint64_t used = 0;
  std::uint64_t entries = 0;
  std::uint64_t lookups = 0;
  std::uint64_t hits = 0;
  std::uint64_t demand_insertions = 0;
  std::uint64_t prefetch_insertions = 0;
  std::uint64_t evictions = 0;
  std::uint64_t rejections = 0;
  std::uint64_t prefetched_bytes = 0;
  std::uint64_t prefetched_bytes_hit = 0;
  double hit_ratio = 0;
  double useless_prefetch_ratio = 0;
};

enum class InsertResult : std::uint8_t { kInserted, kRefreshed, kRejected };

// Byte-capacity content store. Keys are opaque byte strings: the canonical
// metadata record in Semantic mode, the IRI in Traditional mode.
//
// Victim selection is the resident with the smallest
// (last_access, inserted_at, key) under LRU, (inserted_at, key) under FIFO.
// Timestamps passed to lookup/insert must never go backwards.
class Cache {
 public:
  explicit Cache(std::uint64_t capacity, Replacement policy = Replacement::kLru)
      : capacity_(capacity), policy_(policy) {}

  // On a hit, refreshes recency and returns the entry as it is after the
  // lookup.
  std::optional<CacheEntry> lookup(std::string_view key, SimTime now);

  InsertResult insert(std::string_view key, std::uint64_t size, Origin origin,
                      SimTime now);

  // Credits a prefetched entry as served without counting a lookup. Used
  // when a request joined the in-flight prefetch of that entry.
  void mark_prefetch_used(std::string_view key);

  // Residency test that touches neither counters nor recency.
  bool contains(std::string_view key) const;
  const CacheEntry* peek(std::string_view key) const;

  CacheStats stats() const;

  std::uint64_t capacity() const { return capacity_; }
  std::uint64_t used() const { return used_; }
  std::size_t size() const { return entries_.size(); }
  Replacement policy() const { return policy_; }

 private:
  using OrderKey = std::tuple<SimTime, SimTime, std::string>;

  void advance_clock(SimTime now);
  OrderKey order_key(const CacheEntry& e) const;
  void evict_one();
  void consume_prefetch_credit(CacheEntry& e);

  std::uint64_t capacity_;
  Replacement policy_;
  std::uint64_t used_ = 0;
  SimTime clock_ = 0;
  bool clock_started_ = false;
  std::map<std::string, CacheEntry, std::less<>> entries_;
  std::set<OrderKey> order_;
  CacheStats counters_;
};

}  // namespace semcache
