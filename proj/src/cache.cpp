#include "semcache/cache.hpp"

#include <fmt/format.h>

#include "semcache/error.hpp"

namespace semcache {

std::string_view to_string(Origin o) {
  return o == Origin::kDemand ? "demand" : "prefetch";
}

std::string_view to_string(Replacement r) {
  return r == Replacement::kLru ? "lru" : "fifo";
}

bool parse_replacement(std::string_view text, Replacement& out) {
  if (text == "lru") {
    out = Replacement::kLru;
  } else if (text == "fifo") {
    out = Replacement::kFifo;
  } else {
    return false;
  }
  return true;
}

void Cache::advance_clock(SimTime now) {
  if (clock_started_ && now < clock_)
    throw Error(ErrorCode::kTimeRegression,
                fmt::format("time went backwards: {} after {}", now, clock_));
  clock_started_ = true;
  clock_ = now;
}

Cache::OrderKey Cache::order_key(const CacheEntry& e) const {
  if (policy_ == Replacement::kFifo) return {e.inserted_at, 0.0, e.key};
  return {e.last_access, e.inserted_at, e.key};
}

void Cache::consume_prefetch_credit(CacheEntry& e) {
  if (!e.unused_prefetch) return;
  e.unused_prefetch = false;
  counters_.prefetched_bytes_hit += e.size;
}

std::optional<CacheEntry> Cache::lookup(std::string_view key, SimTime now) {
  advance_clock(now);
  ++counters_.lookups;
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;

  auto& e = it->second;
  ++counters_.hits;
  ++e.hit_count;
  consume_prefetch_credit(e);
  if (policy_ == Replacement::kLru) {
    order_.erase(order_key(e));
    e.last_access = now;
    order_.insert(order_key(e));
  } else {
    e.last_access = now;
  }
  return e;
}

void Cache::evict_one() {
  auto victim = order_.begin();
  auto it = entries_.find(std::get<2>(*victim));
  used_ -= it->second.size;
  order_.erase(victim);
  entries_.erase(it);
  ++counters_.evictions;
}

InsertResult Cache::insert(std::string_view key, std::uint64_t size,
                           Origin origin, SimTime now) {
  if (size == 0)
    throw Error(ErrorCode::kInvalidArgument, "cache entries must have size > 0");
  advance_clock(now);
  if (size > capacity_) {
    ++counters_.rejections;
    return InsertResult::kRejected;
  }

  if (auto it = entries_.find(key); it != entries_.end()) {
    auto& e = it->second;
    if (e.size == size) {
      order_.erase(order_key(e));
      e.last_access = now;
      e.origin = origin;
      order_.insert(order_key(e));
      return InsertResult::kRefreshed;
    }
    // Size changed: drop the stale copy and insert afresh below.
    used_ -= e.size;
    order_.erase(order_key(e));
    entries_.erase(it);
  }

  while (used_ + size > capacity_) evict_one();

  CacheEntry e;
  e.key = std::string(key);
  e.size = size;
  e.origin = origin;
  e.inserted_at = now;
  e.last_access = now;
  if (origin == Origin::kPrefetch) {
    e.unused_prefetch = true;
    counters_.prefetched_bytes += size;
    ++counters_.prefetch_insertions;
  } else {
    ++counters_.demand_insertions;
  }
  used_ += size;
  order_.insert(order_key(e));
  entries_.emplace(e.key, std::move(e));
  return InsertResult::kInserted;
}

void Cache::mark_prefetch_used(std::string_view key) {
  if (auto it = entries_.find(key); it != entries_.end())
    consume_prefetch_credit(it->second);
}

bool Cache::contains(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

const CacheEntry* Cache::peek(std::string_view key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

CacheStats Cache::stats() const {
  CacheStats s = counters_;
  s.capacity = capacity_;
  s.used = used_;
  s.entries = entries_.size();
  s.hit_ratio = s.lookups == 0 ? 0.0
                               : static_cast<double>(s.hits) /
                                     static_cast<double>(s.lookups);
  s.useless_prefetch_ratio =
      s.prefetched_bytes == 0
          ? 0.0
          : static_cast<double>(s.prefetched_bytes - s.prefetched_bytes_hit) /
                static_cast<double>(s.prefetched_bytes);
  return s;
}

}  // namespace semcache
