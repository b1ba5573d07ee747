#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "semcache/knowledge_base.hpp"

namespace semcache {

struct TraceEntry {
  double time_ms = 0;
  std::uint32_t user_id = 0;
  std::uint32_t cell_id = 0;
  std::string entity_iri;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

using Trace = std::vector<TraceEntry>;

// Trace CSV: header `time_ms,user_id,cell_id,entity_iri`, '#' comments.
// The IRI is the remainder of the line, so it may contain commas. Rows are
// returned stably sorted by time. Throws kParseError / kNegativeTime with the
// line number.
Trace load_trace(std::istream& in);
Trace load_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace);

struct GapDistribution {
  // Fixed gap when min == max, otherwise uniform on [min, max].
  double min_ms = 10000;
  double max_ms = 40000;
};

struct SyntheticSpec {
  std::uint32_t n_users = 20;
  std::uint32_t requests_min = 20;
  std::uint32_t requests_max = 30;
  double p_follow = 0.6;
  GapDistribution gap;
  std::uint32_t cells = 1;
  std::uint64_t seed = 42;
};

// Per user: first request uniform over all entities; each later request
// follows an inferred relation of the previous one with probability
// p_follow (uniform among the candidates), otherwise uniform over all
// entities. Users are assigned to cells round-robin. The first request of
// each user is issued one gap after t = 0.
Trace generate_trace(const KnowledgeBase& kb, const SyntheticSpec& spec);

void validate(const SyntheticSpec& spec);

}  // namespace semcache
