#include "semcache/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "semcache/error.hpp"

namespace semcache {

std::string_view to_string(Mode m) {
  return m == Mode::kSemantic ? "semantic" : "traditional";
}

std::string_view to_string(CacheLocation loc) {
  switch (loc) {
    case CacheLocation::kENodeB: return "enodeb";
    case CacheLocation::kSGW: return "sgw";
    case CacheLocation::kPGW: return "pgw";
  }
  return "?";
}

bool parse_mode(std::string_view text, Mode& out) {
  if (text == "semantic") {
    out = Mode::kSemantic;
  } else if (text == "traditional") {
    out = Mode::kTraditional;
  } else {
    return false;
  }
  return true;
}

bool parse_cache_location(std::string_view text, CacheLocation& out) {
  std::string t;
  for (char c : text)
    if (c != '-' && c != '_')
      t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "enodeb" || t == "enb") {
    out = CacheLocation::kENodeB;
  } else if (t == "sgw") {
    out = CacheLocation::kSGW;
  } else if (t == "pgw") {
    out = CacheLocation::kPGW;
  } else {
    return false;
  }
  return true;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return fmt::format("{:.6f}", v);
}

std::string csv_header() {
  return "mode,cache_location,cache_capacity,cells,users,seed,requests_total,"
         "hits,hit_ratio,mean_latency_ms,prefetched_bytes,prefetched_bytes_hit,"
         "useless_prefetch_ratio,useless_prefetch_origin_share,origin_bytes,"
         "delivered_bytes,metadata_overhead_bytes,metadata_overhead_per_user,"
         "metadata_overhead_ratio";
}

std::string csv_row(const MetricsReport& r) {
  return fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
      to_string(r.mode), to_string(r.cache_location), r.cache_capacity,
      r.cells, r.users, r.seed, r.requests_total, r.hits,
      format_number(r.hit_ratio), format_number(r.mean_latency_ms),
      r.prefetched_bytes, r.prefetched_bytes_hit,
      format_number(r.useless_prefetch_ratio),
      format_number(r.useless_prefetch_origin_share), r.origin_bytes,
      r.delivered_bytes, r.metadata_overhead_bytes,
      format_number(r.metadata_overhead_per_user),
      format_number(r.metadata_overhead_ratio));
}

std::string summary(const MetricsReport& r) {
  std::string out;
  out += fmt::format("mode                 {}\n", to_string(r.mode));
  out += fmt::format("cache                {} x {} bytes ({} cells, {} users)\n",
                     to_string(r.cache_location), r.cache_capacity, r.cells,
                     r.users);
  out += fmt::format("requests             {} ({} served from cache)\n",
                     r.requests_total, r.hits);
  out += fmt::format("hit ratio            {:.4f}\n", r.hit_ratio);
  out += fmt::format("mean latency         {:.3f} ms\n", r.mean_latency_ms);
  out += fmt::format("prefetched           {} bytes ({} used)\n",
                     r.prefetched_bytes, r.prefetched_bytes_hit);
  out += fmt::format("useless prefetch     {:.4f} of prefetched, {:.4f} of origin traffic\n",
                     r.useless_prefetch_ratio, r.useless_prefetch_origin_share);
  out += fmt::format("metadata overhead    {} bytes ({:.1f} per user, {:.6f}% of content)\n",
                     r.metadata_overhead_bytes, r.metadata_overhead_per_user,
                     100.0 * r.metadata_overhead_ratio);
  return out;
}

Improvement improvement(const MetricsReport& semantic,
                        const MetricsReport& traditional) {
  const bool same = semantic.cache_location == traditional.cache_location &&
                    semantic.cache_capacity == traditional.cache_capacity &&
                    semantic.cells == traditional.cells &&
                    semantic.users == traditional.users &&
                    semantic.seed == traditional.seed &&
                    semantic.requests_total == traditional.requests_total;
  if (!same)
    throw Error(ErrorCode::kScenarioMismatch,
                "reports describe different scenarios");

  Improvement out;
  const double st = semantic.hit_ratio;
  const double tt = traditional.hit_ratio;
  if (tt > 0) {
    out.hit_ratio_increase_pct = 100.0 * (st - tt) / tt;
  } else if (st > 0) {
    out.hit_ratio_increase_pct = std::numeric_limits<double>::infinity();
  }
  const double sl = semantic.mean_latency_ms;
  const double tl = traditional.mean_latency_ms;
  if (tl > 0) out.latency_decrease_pct = 100.0 * (tl - sl) / tl;
  return out;
}

}  // namespace semcache
