#include "semcache/workload.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "semcache/error.hpp"
#include "semcache/rng.hpp"

namespace semcache {

namespace {

constexpr std::string_view kHeader = "time_ms,user_id,cell_id,entity_iri";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view text, std::size_t line, std::string_view name) {
  text = trim(text);
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorCode::kParseError,
                fmt::format("line {}: bad {} '{}'", line, name, text), line);
  return value;
}

}  // namespace

Trace load_trace(std::istream& in) {
  Trace out;
  std::string raw;
  std::size_t line = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view row = trim(raw);
    if (row.empty() || row.front() == '#') continue;
    if (!header_seen) {
      if (row != kHeader)
        throw Error(ErrorCode::kParseError,
                    fmt::format("line {}: expected header '{}'", line, kHeader),
                    line);
      header_seen = true;
      continue;
    }
    std::string_view fields[3];
    for (auto& f : fields) {
      const auto comma = row.find(',');
      if (comma == std::string_view::npos)
        throw Error(ErrorCode::kParseError,
                    fmt::format("line {}: expected 4 comma-separated fields", line),
                    line);
      f = row.substr(0, comma);
      row.remove_prefix(comma + 1);
    }
    TraceEntry e;
    e.time_ms = parse_field<double>(fields[0], line, "time_ms");
    if (!std::isfinite(e.time_ms))
      throw Error(ErrorCode::kParseError,
                  fmt::format("line {}: time_ms is not finite", line), line);
    if (e.time_ms < 0)
      throw Error(ErrorCode::kNegativeTime,
                  fmt::format("line {}: negative time {}", line, e.time_ms), line);
    e.user_id = parse_field<std::uint32_t>(fields[1], line, "user_id");
    e.cell_id = parse_field<std::uint32_t>(fields[2], line, "cell_id");
    e.entity_iri = std::string(trim(row));
    if (e.entity_iri.empty())
      throw Error(ErrorCode::kParseError,
                  fmt::format("line {}: empty entity_iri", line), line);
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TraceEntry& a, const TraceEntry& b) {
                     return a.time_ms < b.time_ms;
                   });
  return out;
}

Trace load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kConfigError, fmt::format("cannot open trace '{}'", path));
  return load_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << kHeader << '\n';
  for (const auto& e : trace)
    out << fmt::format("{},{},{},{}\n", e.time_ms, e.user_id, e.cell_id,
                       e.entity_iri);
}

void validate(const SyntheticSpec& spec) {
  if (spec.requests_min > spec.requests_max)
    throw Error(ErrorCode::kConfigError,
                "requests_min must not exceed requests_max");
  if (!(spec.p_follow >= 0 && spec.p_follow <= 1))
    throw Error(ErrorCode::kConfigError, "p_follow must lie in [0, 1]");
  if (!(spec.gap.min_ms >= 0) || !(spec.gap.min_ms <= spec.gap.max_ms) ||
      !std::isfinite(spec.gap.max_ms))
    throw Error(ErrorCode::kConfigError, "gap range must satisfy 0 <= min <= max");
  if (spec.cells == 0) throw Error(ErrorCode::kConfigError, "cells must be > 0");
}

Trace generate_trace(const KnowledgeBase& kb, const SyntheticSpec& spec) {
  validate(spec);
  if (kb.empty())
    throw Error(ErrorCode::kEmptyKnowledgeBase,
                "cannot generate a trace from an empty knowledge base");

  const auto& entities = kb.entities();
  Rng rng(spec.seed);
  Trace out;
  for (std::uint32_t user = 0; user < spec.n_users; ++user) {
    const auto count = rng.between(spec.requests_min, spec.requests_max);
    const std::uint32_t cell = user % spec.cells;
    double t = 0;
    std::string previous;
    for (std::uint64_t i = 0; i < count; ++i) {
      t += rng.uniform(spec.gap.min_ms, spec.gap.max_ms);
      std::string next;
      if (i > 0 && rng.bernoulli(spec.p_follow)) {
        const auto candidates = infer_next(kb, kb.descriptor_of(previous));
        if (!candidates.empty())
          next = candidates[rng.below(candidates.size())].entity_iri;
      }
      if (next.empty()) next = entities[rng.below(entities.size())];
      out.push_back({t, user, cell, next});
      previous = std::move(next);
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TraceEntry& a, const TraceEntry& b) {
                     return a.time_ms < b.time_ms;
                   });
  return out;
}

}  // namespace semcache
