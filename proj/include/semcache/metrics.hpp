#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace semcache {

enum class Mode : std::uint8_t { kSemantic, kTraditional };
enum class CacheLocation : std::uint8_t { kENodeB, kSGW, kPGW };

std::string_view to_string(Mode m);
std::string_view to_string(CacheLocation loc);
bool parse_mode(std::string_view text, Mode& out);
// Accepts enodeb/sgw/pgw, case-insensitive, with or without the dash.
bool parse_cache_location(std::string_view text, CacheLocation& out);

// Outcome of one simulation run.
struct MetricsReport {
  // scenario echo
  Mode mode = Mode::kSemantic;
  CacheLocation cache_location = CacheLocation::kENodeB;
  std::uint64_t cache_capacity = 0;
  std::uint32_t cells = 0;
  std::uint32_t users = 0;
  std::uint64_t seed = 0;

  std::uint64_t requests_total = 0;
  std::uint64_t hits = 0;
  double hit_ratio = 0;
  double mean_latency_ms = 0;

  std::uint64_t prefetched_bytes = 0;
  std::uint64_t prefetched_bytes_hit = 0;
  // unused prefetched bytes / prefetched bytes
  double useless_prefetch_ratio = 0;
  // unused prefetched bytes / everything fetched from the origin
  double useless_prefetch_origin_share = 0;
  std::uint64_t origin_bytes = 0;
  std::uint64_t delivered_bytes = 0;

  std::uint64_t metadata_overhead_bytes = 0;
  double metadata_overhead_per_user = 0;
  double metadata_overhead_ratio = 0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Column names, comma separated, no trailing newline.
std::string csv_header();
std::string csv_row(const MetricsReport& r);
// Multi-line human readable summary.
std::string summary(const MetricsReport& r);

struct Improvement {
  // +infinity when the traditional hit ratio is zero and semantic is not.
  double hit_ratio_increase_pct = 0;
  double latency_decrease_pct = 0;
};

// Semantic over Traditional. Throws kScenarioMismatch when the two reports
// describe different scenarios.
Improvement improvement(const MetricsReport& semantic,
                        const MetricsReport& traditional);

// Fixed-precision rendering used in every CSV; "inf" for infinities.
std::string format_number(double v);

}  // namespace semcache
