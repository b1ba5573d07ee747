#include "semcache/netsim.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <queue>
#include <set>
#include <stdexcept>

#include "semcache/error.hpp"

namespace semcache {

namespace {

// Positions along the path, UE side first.
constexpr std::size_t kLevelUe = 0;
constexpr std::size_t kLevelInternet = 4;

std::size_t cache_level(CacheLocation loc) {
  switch (loc) {
    case CacheLocation::kENodeB: return 1;
    case CacheLocation::kSGW: return 2;
    case CacheLocation::kPGW: return 3;
  }
  return 1;
}

void check_link(const LinkParams& l, std::string_view name) {
  if (!(l.delay_ms >= 0) || !std::isfinite(l.delay_ms))
    throw Error(ErrorCode::kInvalidTopology,
                fmt::format("{} delay must be finite and >= 0", name));
  if (!(l.bandwidth > 0))
    throw Error(ErrorCode::kInvalidTopology,
                fmt::format("{} bandwidth must be > 0", name));
}

enum class EventKind : std::uint8_t {
  kRequestIssued,
  kLinkTransit,      // packet reached an intermediate node
  kMetadataArrived,  // user request reached the cache node
  kOriginReached,    // fetch request reached the origin server
  kOriginResponse,   // demand content reached the cache node
  kPrefetchComplete, // prefetched content reached the cache node
  kDeliveredToUE,
};

struct Packet {
  std::uint32_t cell = 0;
  std::size_t level = 0;
  std::size_t target = 0;
  std::uint64_t bytes = 0;
  // What happens when the packet reaches `target`.
  EventKind on_arrival = EventKind::kDeliveredToUE;
  // Request id for user traffic, fetch id for cache-origin traffic.
  std::uint64_t ref = 0;
};

struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kRequestIssued;
  Packet packet;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct Fetch {
  std::size_t cache = 0;
  std::uint32_t cell = 0;
  std::string key;
  std::uint64_t size = 0;
  Origin origin = Origin::kDemand;
  std::vector<std::uint64_t> waiters;
};

struct PendingRequest {
  RequestRecord record;
  std::string key;
  std::uint64_t content_size = 0;
  std::uint64_t request_bytes = 0;
};

class Simulator {
 public:
  Simulator(const SimulationConfig& cfg, const KnowledgeBase& kb,
            const InferencePolicy& inference)
      : cfg_(cfg), kb_(kb), inference_(inference) {
    const auto& t = cfg.topology;
    for (std::uint32_t c = 0; c < t.cells; ++c) {
      ue_enb_up_.emplace_back(t.ue_enb);
      ue_enb_down_.emplace_back(t.ue_enb);
      enb_sgw_up_.emplace_back(t.enb_sgw);
      enb_sgw_down_.emplace_back(t.enb_sgw);
    }
    const std::size_t n_caches =
        t.cache_location == CacheLocation::kENodeB ? t.cells : 1;
    for (std::size_t i = 0; i < n_caches; ++i) {
      caches_.emplace_back(t.cache_capacity, t.replacement);
      inflight_.emplace_back();
    }
    level_ = cache_level(t.cache_location);
  }

  SimulationResult run(const Trace& trace) {
    requests_.reserve(trace.size());
    for (const auto& entry : trace) {
      PendingRequest p;
      p.record.request_id = requests_.size();
      p.record.user_id = entry.user_id;
      p.record.cell_id = entry.cell_id;
      p.record.descriptor = kb_.descriptor_of(entry.entity_iri);
      p.record.issued_at = entry.time_ms;
      p.key = key_of(p.record.descriptor);
      p.content_size = kb_.content_size_of(entry.entity_iri);
      p.request_bytes = cfg_.request_bytes;
      if (cfg_.mode == Mode::kSemantic)
        p.request_bytes += wire_size(p.record.descriptor);
      Packet pk;
      pk.cell = entry.cell_id;
      pk.ref = p.record.request_id;
      schedule(entry.time_ms, EventKind::kRequestIssued, pk);
      requests_.push_back(std::move(p));
    }

    while (!queue_.empty()) {
      Event ev = queue_.top();
      queue_.pop();
      dispatch(ev);
    }
    if (completed_ != requests_.size())
      throw std::logic_error("simulation ended with undelivered requests");
    return collect(trace);
  }

 private:
  std::string key_of(const MetadataDescriptor& d) const {
    if (cfg_.mode == Mode::kTraditional) return d.entity_iri;
    auto bytes = serialize_descriptor(d);
    return std::string(bytes.begin(), bytes.end());
  }

  std::size_t cache_index(std::uint32_t cell) const {
    return cfg_.topology.cache_location == CacheLocation::kENodeB ? cell : 0;
  }

  void schedule(SimTime t, EventKind kind, const Packet& pk) {
    queue_.push(Event{t, seq_++, kind, pk});
  }

  // Link between `level` and `level + 1` in the given direction.
  Link& link(std::size_t level, std::uint32_t cell, bool up) {
    switch (level) {
      case 0: return up ? ue_enb_up_[cell] : ue_enb_down_[cell];
      case 1: return up ? enb_sgw_up_[cell] : enb_sgw_down_[cell];
      case 2: return up ? sgw_pgw_up_ : sgw_pgw_down_;
      default: return up ? pgw_inet_up_ : pgw_inet_down_;
    }
  }

  // Moves the packet one hop toward its target, or delivers it.
  void forward(SimTime now, Packet pk) {
    if (pk.level == pk.target) {
      schedule(now, pk.on_arrival, pk);
      return;
    }
    const bool up = pk.target > pk.level;
    Link& l = link(up ? pk.level : pk.level - 1, pk.cell, up);
    const SimTime arrival = l.send(now, pk.bytes);
    pk.level = up ? pk.level + 1 : pk.level - 1;
    if (pk.level == pk.target) {
      schedule(arrival, pk.on_arrival, pk);
    } else {
      schedule(arrival, EventKind::kLinkTransit, pk);
    }
  }

  void send(SimTime now, std::uint32_t cell, std::size_t from, std::size_t to,
            std::uint64_t bytes, EventKind on_arrival, std::uint64_t ref) {
    Packet pk;
    pk.cell = cell;
    pk.level = from;
    pk.target = to;
    pk.bytes = bytes;
    pk.on_arrival = on_arrival;
    pk.ref = ref;
    forward(now, pk);
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case EventKind::kRequestIssued: {
        const auto& p = requests_[ev.packet.ref];
        send(ev.time, p.record.cell_id, kLevelUe, level_, p.request_bytes,
             EventKind::kMetadataArrived, ev.packet.ref);
        break;
      }
      case EventKind::kLinkTransit:
        forward(ev.time, ev.packet);
        break;
      case EventKind::kMetadataArrived:
        on_metadata(ev.time, ev.packet.ref);
        break;
      case EventKind::kOriginReached: {
        const auto& f = fetches_[ev.packet.ref];
        send(ev.time, f.cell, kLevelInternet, level_, f.size,
             f.origin == Origin::kDemand ? EventKind::kOriginResponse
                                         : EventKind::kPrefetchComplete,
             ev.packet.ref);
        break;
      }
      case EventKind::kOriginResponse:
      case EventKind::kPrefetchComplete:
        on_content(ev.time, ev.packet.ref);
        break;
      case EventKind::kDeliveredToUE: {
        auto& r = requests_[ev.packet.ref].record;
        r.completed_at = ev.time;
        ++completed_;
        break;
      }
    }
  }

  // Cache decision for a user request, then (Semantic) prefetch of whatever
  // the inference proposes. The demand fetch is queued first so it is never
  // behind its own prefetches on the upstream links.
  void on_metadata(SimTime now, std::uint64_t id) {
    auto& p = requests_[id];
    const std::size_t ci = cache_index(p.record.cell_id);
    Cache& cache = caches_[ci];
    auto& inflight = inflight_[ci];

    if (cache.lookup(p.key, now)) {
      p.record.served_from = ServedFrom::kCache;
      send(now, p.record.cell_id, level_, kLevelUe, p.content_size,
           EventKind::kDeliveredToUE, id);
    } else {
      p.record.served_from = ServedFrom::kOrigin;
      if (auto it = inflight.find(p.key); it != inflight.end()) {
        fetches_[it->second].waiters.push_back(id);
      } else {
        const auto fid = start_fetch(ci, p.record.cell_id, p.key,
                                     p.content_size, Origin::kDemand);
        fetches_[fid].waiters.push_back(id);
        send(now, p.record.cell_id, level_, kLevelInternet, p.request_bytes,
             EventKind::kOriginReached, fid);
      }
    }

    if (cfg_.mode != Mode::kSemantic) return;
    for (const auto& d : inference_.infer(p.record.descriptor)) {
      std::string key = key_of(d);
      if (cache.contains(key) || inflight.count(key)) continue;
      const auto fid = start_fetch(ci, p.record.cell_id, key,
                                   kb_.content_size_of(d.entity_iri),
                                   Origin::kPrefetch);
      send(now, p.record.cell_id, level_, kLevelInternet, cfg_.request_bytes,
           EventKind::kOriginReached, fid);
    }
  }

  std::uint64_t start_fetch(std::size_t ci, std::uint32_t cell, std::string key,
                            std::uint64_t size, Origin origin) {
    const std::uint64_t fid = fetches_.size();
    inflight_[ci].emplace(key, fid);
    fetches_.push_back(Fetch{ci, cell, std::move(key), size, origin, {}});
    origin_bytes_ += size;
    return fid;
  }

  void on_content(SimTime now, std::uint64_t fid) {
    Fetch& f = fetches_[fid];
    Cache& cache = caches_[f.cache];
    inflight_[f.cache].erase(f.key);
    cache.insert(f.key, f.size, f.origin, now);
    if (f.origin == Origin::kPrefetch && !f.waiters.empty())
      cache.mark_prefetch_used(f.key);
    for (auto id : f.waiters) {
      const auto& p = requests_[id];
      send(now, p.record.cell_id, level_, kLevelUe, p.content_size,
           EventKind::kDeliveredToUE, id);
    }
  }

  SimulationResult collect(const Trace& trace) {
    SimulationResult out;
    MetricsReport& m = out.report;
    const auto& t = cfg_.topology;
    m.mode = cfg_.mode;
    m.cache_location = t.cache_location;
    m.cache_capacity = t.cache_capacity;
    m.cells = t.cells;
    m.seed = cfg_.seed;

    std::set<std::uint32_t> users;
    double latency_sum = 0;
    for (auto& p : requests_) {
      users.insert(p.record.user_id);
      latency_sum += p.record.latency();
      if (p.record.served_from == ServedFrom::kCache) ++m.hits;
      m.delivered_bytes += p.content_size;
      out.records.push_back(std::move(p.record));
    }
    m.users = static_cast<std::uint32_t>(users.size());
    m.requests_total = out.records.size();
    if (m.requests_total > 0) {
      m.hit_ratio = static_cast<double>(m.hits) / static_cast<double>(m.requests_total);
      m.mean_latency_ms = latency_sum / static_cast<double>(m.requests_total);
    }

    for (const auto& c : caches_) {
      out.caches.push_back(c.stats());
      m.prefetched_bytes += out.caches.back().prefetched_bytes;
      m.prefetched_bytes_hit += out.caches.back().prefetched_bytes_hit;
    }
    m.origin_bytes = origin_bytes_;
    const auto unused = m.prefetched_bytes - m.prefetched_bytes_hit;
    if (m.prefetched_bytes > 0)
      m.useless_prefetch_ratio =
          static_cast<double>(unused) / static_cast<double>(m.prefetched_bytes);
    if (m.origin_bytes > 0)
      m.useless_prefetch_origin_share =
          static_cast<double>(unused) / static_cast<double>(m.origin_bytes);

    if (cfg_.mode == Mode::kSemantic) {
      const auto overhead = metadata_overhead(trace, kb_);
      m.metadata_overhead_bytes = overhead.total_bytes;
      m.metadata_overhead_per_user = overhead.per_user_bytes;
      m.metadata_overhead_ratio = overhead.ratio_of_total_traffic;
    }
    return out;
  }

  const SimulationConfig& cfg_;
  const KnowledgeBase& kb_;
  const InferencePolicy& inference_;
  std::size_t level_ = 1;

  std::vector<Link> ue_enb_up_, ue_enb_down_, enb_sgw_up_, enb_sgw_down_;
  Link sgw_pgw_up_{cfg_.topology.sgw_pgw}, sgw_pgw_down_{cfg_.topology.sgw_pgw};
  Link pgw_inet_up_{cfg_.topology.pgw_internet},
      pgw_inet_down_{cfg_.topology.pgw_internet};

  std::vector<Cache> caches_;
  std::vector<std::map<std::string, std::uint64_t, std::less<>>> inflight_;
  std::vector<Fetch> fetches_;
  std::vector<PendingRequest> requests_;
  std::priority_queue<Event, std::vector<Event>, EventLater> queue_;
  std::uint64_t seq_ = 0;
  std::uint64_t completed_ = 0;
  std::uint64_t origin_bytes_ = 0;
};

void validate_trace(const KnowledgeBase& kb, const Trace& trace,
                    std::uint32_t cells) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& e = trace[i];
    if (e.time_ms < 0 || !std::isfinite(e.time_ms))
      throw Error(ErrorCode::kNegativeTime,
                  fmt::format("trace entry {} has time {}", i, e.time_ms));
    if (i > 0 && e.time_ms < trace[i - 1].time_ms)
      throw Error(ErrorCode::kUnsortedTrace,
                  fmt::format("trace entry {} at {} ms precedes entry {} at {} ms",
                              i, e.time_ms, i - 1, trace[i - 1].time_ms));
    if (!kb.contains(e.entity_iri))
      throw Error(ErrorCode::kUnknownEntity,
                  fmt::format("trace entry {} requests unknown entity \"{}\"", i,
                              e.entity_iri));
    if (e.cell_id >= cells)
      throw Error(ErrorCode::kInvalidTrace,
                  fmt::format("trace entry {} uses cell {} but the topology has {}",
                              i, e.cell_id, cells));
  }
}

}  // namespace

SimTime transfer_time(const LinkParams& link, std::uint64_t bytes) {
  return link.delay_ms + static_cast<double>(bytes) / link.bandwidth;
}

SimTime Link::send(SimTime now, std::uint64_t bytes) {
  const SimTime start = std::max(now, free_at_);
  free_at_ = start + static_cast<double>(bytes) / params_.bandwidth;
  bytes_ += bytes;
  return free_at_ + params_.delay_ms;
}

void validate(const Topology& topo) {
  if (topo.cells == 0)
    throw Error(ErrorCode::kInvalidTopology, "topology needs at least one cell");
  check_link(topo.ue_enb, "ue-enb");
  check_link(topo.enb_sgw, "enb-sgw");
  check_link(topo.sgw_pgw, "sgw-pgw");
  check_link(topo.pgw_internet, "pgw-internet");
  if (topo.cache_capacity == 0)
    throw Error(ErrorCode::kInvalidTopology, "cache capacity must be > 0");
}

std::size_t hops_to_cache(CacheLocation loc) { return cache_level(loc); }

std::string_view to_string(ServedFrom s) {
  return s == ServedFrom::kCache ? "cache" : "origin";
}

std::string to_json_line(const RequestRecord& r) {
  nlohmann::ordered_json j;
  j["request_id"] = r.request_id;
  j["user_id"] = r.user_id;
  j["cell_id"] = r.cell_id;
  j["entity_iri"] = r.descriptor.entity_iri;
  j["entity_kind"] = std::string(to_string(r.descriptor.entity_kind));
  j["issued_at_ms"] = r.issued_at;
  j["completed_at_ms"] = r.completed_at;
  j["latency_ms"] = r.latency();
  j["served_from"] = std::string(to_string(r.served_from));
  return j.dump();
}

SimulationResult run_simulation(const SimulationConfig& config,
                                const KnowledgeBase& kb, const Trace& trace,
                                const InferencePolicy* inference) {
  validate(config.topology);
  validate_trace(kb, trace, config.topology.cells);
  RelationInference rule(kb, config.max_prefetch);
  Simulator sim(config, kb, inference ? *inference : rule);
  return sim.run(trace);
}

MetadataOverhead metadata_overhead(const Trace& trace, const KnowledgeBase& kb,
                                   std::uint64_t baseline_header_bytes) {
  MetadataOverhead out;
  std::set<std::uint32_t> users;
  std::uint64_t content = 0;
  for (const auto& e : trace) {
    users.insert(e.user_id);
    const auto d = kb.descriptor_of(e.entity_iri);
    const auto w = wire_size(d);
    out.total_bytes += w > baseline_header_bytes ? w - baseline_header_bytes : 0;
    content += kb.content_size_of(e.entity_iri);
  }
  if (!users.empty())
    out.per_user_bytes =
        static_cast<double>(out.total_bytes) / static_cast<double>(users.size());
  if (content > 0)
    out.ratio_of_total_traffic =
        static_cast<double>(out.total_bytes) / static_cast<double>(content);
  return out;
}

}  // namespace semcache
