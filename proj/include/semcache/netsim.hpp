#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "semcache/cache.hpp"
#include "semcache/knowledge_base.hpp"
#include "semcache/metadata_codec.hpp"
#include "semcache/metrics.hpp"
#include "semcache/workload.hpp"

namespace semcache {

struct LinkParams {
  SimTime delay_ms = 0;
  // Bytes per millisecond; may be +infinity.
  double bandwidth = 1250;
};

// Propagation delay plus serialization time on an idle link.
SimTime transfer_time(const LinkParams& link, std::uint64_t bytes);

// One direction of a link. Transmissions are serialized in the order they
// are offered: a transfer starts no earlier than the previous one finished
// putting its bytes on the wire.
class Link {
 public:
  explicit Link(LinkParams params) : params_(params) {}

  // Returns the time the last byte arrives at the far end.
  SimTime send(SimTime now, std::uint64_t bytes);

  const LinkParams& params() const { return params_; }
  SimTime busy_until() const { return free_at_; }
  std::uint64_t bytes_carried() const { return bytes_; }

 private:
  LinkParams params_;
  SimTime free_at_ = 0;
  std::uint64_t bytes_ = 0;
};

struct Topology {
  std::uint32_t cells = 1;
  LinkParams ue_enb{10, 1250};
  LinkParams enb_sgw{5, 1250};
  LinkParams sgw_pgw{5, 1250};
  LinkParams pgw_internet{20, 1250};
  CacheLocation cache_location = CacheLocation::kENodeB;
  // Per cache. With eNodeB placement every cell gets a cache this large.
  std::uint64_t cache_capacity = 20'000'000;
  Replacement replacement = Replacement::kLru;
};

void validate(const Topology& topo);

// Number of links between the UE and the cache node.
std::size_t hops_to_cache(CacheLocation loc);

struct SimulationConfig {
  Topology topology;
  Mode mode = Mode::kSemantic;
  std::uint64_t seed = 42;
  // Size of a request datagram without metadata.
  std::uint64_t request_bytes = 40;
  // Cap on prefetches per request; 0 is unlimited.
  std::size_t max_prefetch = 0;
  CodecOptions codec;
};

enum class ServedFrom : std::uint8_t { kCache, kOrigin };
std::string_view to_string(ServedFrom s);

struct RequestRecord {
  std::uint64_t request_id = 0;
  std::uint32_t user_id = 0;
  std::uint32_t cell_id = 0;
  MetadataDescriptor descriptor;
  SimTime issued_at = 0;
  SimTime completed_at = 0;
  ServedFrom served_from = ServedFrom::kOrigin;

  SimTime latency() const { return completed_at - issued_at; }
  friend bool operator==(const RequestRecord&, const RequestRecord&) = default;
};

std::string to_json_line(const RequestRecord& r);

struct SimulationResult {
  MetricsReport report;
  std::vector<RequestRecord> records;  // ordered by request id
  std::vector<CacheStats> caches;      // one per cache instance
};

// Runs the trace through the network. In Semantic mode the requests carry
// their metadata in a hop-by-hop header and, when that metadata reaches the
// cache node, `inference` proposes entities to prefetch. Passing nullptr
// uses the spouse/starring rule over `kb`.
//
// Throws kUnsortedTrace, kUnknownEntity, kNegativeTime, kInvalidTrace,
// kInvalidTopology.
SimulationResult run_simulation(const SimulationConfig& config,
                                const KnowledgeBase& kb, const Trace& trace,
                                const InferencePolicy* inference = nullptr);

struct MetadataOverhead {
  std::uint64_t total_bytes = 0;
  double per_user_bytes = 0;
  double ratio_of_total_traffic = 0;
};

// Bytes added to user requests by the hop-by-hop metadata, relative to a
// request that carries `baseline_header_bytes` of extension header.
MetadataOverhead metadata_overhead(const Trace& trace, const KnowledgeBase& kb,
                                   std::uint64_t baseline_header_bytes = 0);

}  // namespace semcache
