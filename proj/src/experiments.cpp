#include "semcache/experiments.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>

#include "semcache/error.hpp"

namespace semcache {

namespace {

[[noreturn]] void config_fail(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::kConfigError, fmt::format("{}: {}", key, msg));
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (value.empty() || ec != std::errc{} || ptr != last)
    config_fail(key, fmt::format("'{}' is not a valid number", value));
  return out;
}

double parse_nonneg(const std::string& key, const std::string& value) {
  if (value == "inf") return std::numeric_limits<double>::infinity();
  const double v = parse_number<double>(key, value);
  if (!(v >= 0)) config_fail(key, "must be >= 0");
  return v;
}

constexpr std::array<Mode, 2> kModes = {Mode::kSemantic, Mode::kTraditional};

Scenario apply_value(Scenario s, SweepVariable var, const SweepValue& value) {
  switch (var) {
    case SweepVariable::kUserCount:
      s.workload.n_users = std::get<std::uint32_t>(value);
      break;
    case SweepVariable::kCacheSize:
      s.sim.topology.cache_capacity = std::get<std::uint64_t>(value);
      break;
    case SweepVariable::kCacheLocation:
      s.sim.topology.cache_location = std::get<CacheLocation>(value);
      break;
  }
  return s;
}

Trace trace_for(const Scenario& s, const KnowledgeBase& kb) {
  return materialize_trace(s, kb);
}

MetricsReport run_point(const Scenario& s, Mode mode, const KnowledgeBase& kb,
                        const Trace& trace) {
  SimulationConfig cfg = s.sim;
  cfg.mode = mode;
  return run_simulation(cfg, kb, trace).report;
}

Error point_error(const SweepSpec& spec, const SweepValue& value, Mode mode,
                  std::uint32_t rep, std::exception_ptr ep) {
  const auto where = fmt::format("sweep point {}={} ({}, repeat {})",
                                 to_string(spec.variable), to_string(value),
                                 to_string(mode), rep);
  try {
    std::rethrow_exception(ep);
  } catch (const Error& e) {
    return Error(e.code(), where + ": " + e.what(), e.line());
  } catch (const std::exception& e) {
    return Error(ErrorCode::kConfigError, where + ": " + e.what());
  }
}

struct PointIndex {
  std::size_t value;
  std::uint32_t repeat;
  Mode mode;
};

std::vector<PointIndex> enumerate_points(const SweepSpec& spec) {
  std::vector<PointIndex> out;
  for (std::size_t v = 0; v < spec.values.size(); ++v)
    for (std::uint32_t r = 0; r < spec.repeat; ++r)
      for (Mode m : kModes) out.push_back({v, r, m});
  return out;
}

SweepTable assemble(const SweepSpec& spec, const std::vector<PointIndex>& points,
                    std::vector<MetricsReport> reports) {
  SweepTable t;
  t.variable = spec.variable;
  for (std::size_t i = 0; i < points.size(); ++i)
    t.rows.push_back({spec.values[points[i].value], points[i].repeat,
                      std::move(reports[i])});
  return t;
}

}  // namespace

namespace {

std::uint64_t byte_size(const std::string& field, const std::string& text) {
  std::string t = trim(text);
  std::uint64_t mult = 1;
  auto ends_with = [&](std::string_view suf) {
    return t.size() > suf.size() &&
           std::equal(suf.rbegin(), suf.rend(), t.rbegin(), [](char a, char b) {
             return a == std::toupper(static_cast<unsigned char>(b));
           });
  };
  if (ends_with("GB")) {
    mult = 1'000'000'000;
  } else if (ends_with("MB")) {
    mult = 1'000'000;
  } else if (ends_with("KB")) {
    mult = 1'000;
  }
  if (mult != 1) t = trim(t.substr(0, t.size() - 2));
  const double v = parse_number<double>(field, t);
  if (!(v > 0) || !std::isfinite(v)) config_fail(field, "must be > 0");
  return static_cast<std::uint64_t>(std::llround(v * static_cast<double>(mult)));
}

}  // namespace

std::uint64_t parse_byte_size(const std::string& text) { return byte_size("size", text); }

void apply_setting(Scenario& s, const std::string& key, const std::string& value) {
  auto& topo = s.sim.topology;
  auto& w = s.workload;
  try {
    if (key == "kb") {
      s.kb_path = value;
    } else if (key == "trace") {
      s.trace_path = value;
    } else if (key == "mode") {
      if (!parse_mode(value, s.sim.mode))
        config_fail(key, "expected semantic or traditional");
    } else if (key == "seed") {
      s.sim.seed = parse_number<std::uint64_t>(key, value);
      w.seed = s.sim.seed;
    } else if (key == "cells") {
      topo.cells = parse_number<std::uint32_t>(key, value);
      if (topo.cells == 0) config_fail(key, "must be > 0");
      w.cells = topo.cells;
    } else if (key == "users") {
      w.n_users = parse_number<std::uint32_t>(key, value);
    } else if (key == "requests_min") {
      w.requests_min = parse_number<std::uint32_t>(key, value);
    } else if (key == "requests_max") {
      w.requests_max = parse_number<std::uint32_t>(key, value);
    } else if (key == "p_follow") {
      w.p_follow = parse_number<double>(key, value);
      if (!(w.p_follow >= 0 && w.p_follow <= 1)) config_fail(key, "must lie in [0, 1]");
    } else if (key == "gap_min_ms") {
      w.gap.min_ms = parse_nonneg(key, value);
    } else if (key == "gap_max_ms") {
      w.gap.max_ms = parse_nonneg(key, value);
    } else if (key == "cache_location") {
      if (!parse_cache_location(value, topo.cache_location))
        config_fail(key, "expected enodeb, sgw or pgw");
    } else if (key == "cache_size") {
      topo.cache_capacity = byte_size(key, value);
    } else if (key == "replacement") {
      if (!parse_replacement(value, topo.replacement))
        config_fail(key, "expected lru or fifo");
    } else if (key == "max_prefetch") {
      s.sim.max_prefetch = parse_number<std::size_t>(key, value);
    } else if (key == "request_bytes") {
      s.sim.request_bytes = parse_number<std::uint64_t>(key, value);
    } else if (key == "option_type") {
      s.sim.codec.option_type = static_cast<std::uint8_t>(
          std::stoul(value, nullptr, 0) & 0xFF);
    } else if (key == "ue_enb_delay_ms") {
      topo.ue_enb.delay_ms = parse_nonneg(key, value);
    } else if (key == "enb_sgw_delay_ms") {
      topo.enb_sgw.delay_ms = parse_nonneg(key, value);
    } else if (key == "sgw_pgw_delay_ms") {
      topo.sgw_pgw.delay_ms = parse_nonneg(key, value);
    } else if (key == "pgw_internet_delay_ms") {
      topo.pgw_internet.delay_ms = parse_nonneg(key, value);
    } else if (key == "bandwidth") {
      const double bw = parse_nonneg(key, value);
      if (!(bw > 0)) config_fail(key, "must be > 0");
      topo.ue_enb.bandwidth = topo.enb_sgw.bandwidth = topo.sgw_pgw.bandwidth =
          topo.pgw_internet.bandwidth = bw;
    } else if (key == "ue_enb_bandwidth" || key == "enb_sgw_bandwidth" ||
               key == "sgw_pgw_bandwidth" || key == "pgw_internet_bandwidth") {
      const double bw = parse_nonneg(key, value);
      if (!(bw > 0)) config_fail(key, "must be > 0");
      auto& link = key == "ue_enb_bandwidth"    ? topo.ue_enb
                   : key == "enb_sgw_bandwidth" ? topo.enb_sgw
                   : key == "sgw_pgw_bandwidth" ? topo.sgw_pgw
                                                : topo.pgw_internet;
      link.bandwidth = bw;
    } else {
      config_fail(key, "unknown setting");
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    config_fail(key, fmt::format("invalid value '{}'", value));
  }
}

Scenario parse_scenario(std::istream& in, Scenario base) {
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kConfigError,
                  fmt::format("line {}: expected key = value", line), line);
    try {
      apply_setting(base, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("line {}: {}", line, e.what()), line);
    }
  }
  return base;
}

Scenario load_scenario_file(const std::string& path, Scenario base) {
  std::ifstream in(path);
  if (!in) config_fail("scenario", fmt::format("cannot open '{}'", path));
  Scenario s = parse_scenario(in, std::move(base));
  // Relative data paths resolve against the scenario file's directory.
  const auto slash = path.find_last_of('/');
  const std::string dir = slash == std::string::npos ? "" : path.substr(0, slash + 1);
  auto resolve = [&](std::string& p) {
    if (!p.empty() && p.front() != '/' && !dir.empty()) p = dir + p;
  };
  resolve(s.kb_path);
  resolve(s.trace_path);
  return s;
}

Scenario reference_scenario(const std::string& kb_path) {
  Scenario s;
  s.kb_path = kb_path;
  s.sim.topology.cells = 4;
  s.sim.topology.cache_location = CacheLocation::kENodeB;
  s.sim.topology.cache_capacity = 20'000'000;
  s.sim.seed = 42;
  s.workload.n_users = 20;
  s.workload.requests_min = 20;
  s.workload.requests_max = 30;
  s.workload.p_follow = 0.6;
  s.workload.gap = {10000, 40000};
  s.workload.cells = 4;
  s.workload.seed = 42;
  return s;
}

Trace materialize_trace(const Scenario& s, const KnowledgeBase& kb) {
  if (s.trace_path.empty()) {
    SyntheticSpec spec = s.workload;
    spec.cells = s.sim.topology.cells;
    return generate_trace(kb, spec);
  }
  Trace trace = load_trace_file(s.trace_path);
  // A loaded trace is narrowed to the first n_users users.
  std::erase_if(trace, [&](const TraceEntry& e) {
    return e.user_id >= s.workload.n_users;
  });
  return trace;
}

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::kUserCount: return "users";
    case SweepVariable::kCacheSize: return "cache_size";
    case SweepVariable::kCacheLocation: return "cache_location";
  }
  return "?";
}

bool parse_sweep_variable(std::string_view text, SweepVariable& out) {
  if (text == "users") {
    out = SweepVariable::kUserCount;
  } else if (text == "cache_size" || text == "cache-size") {
    out = SweepVariable::kCacheSize;
  } else if (text == "cache_location" || text == "cache-location" ||
             text == "location") {
    out = SweepVariable::kCacheLocation;
  } else {
    return false;
  }
  return true;
}

std::string to_string(const SweepValue& v) {
  if (auto* u = std::get_if<std::uint32_t>(&v)) return std::to_string(*u);
  if (auto* b = std::get_if<std::uint64_t>(&v)) return std::to_string(*b);
  return std::string(to_string(std::get<CacheLocation>(v)));
}

std::vector<SweepValue> default_values(SweepVariable v) {
  switch (v) {
    case SweepVariable::kUserCount:
      return {1u, 2u, 5u, 10u, 20u};
    case SweepVariable::kCacheSize:
      return {std::uint64_t{5'000'000}, std::uint64_t{10'000'000},
              std::uint64_t{20'000'000}, std::uint64_t{50'000'000},
              std::uint64_t{100'000'000}};
    case SweepVariable::kCacheLocation:
      return {CacheLocation::kENodeB, CacheLocation::kSGW, CacheLocation::kPGW};
  }
  return {};
}

void validate(const SweepSpec& spec) {
  if (spec.values.empty()) config_fail("values", "sweep needs at least one value");
  if (spec.repeat == 0) config_fail("repeat", "must be >= 1");
  for (const auto& v : spec.values) {
    const bool ok =
        (spec.variable == SweepVariable::kUserCount &&
         std::holds_alternative<std::uint32_t>(v)) ||
        (spec.variable == SweepVariable::kCacheSize &&
         std::holds_alternative<std::uint64_t>(v)) ||
        (spec.variable == SweepVariable::kCacheLocation &&
         std::holds_alternative<CacheLocation>(v));
    if (!ok)
      config_fail("values", fmt::format("value {} does not fit variable {}",
                                        to_string(v), to_string(spec.variable)));
  }
}

const MetricsReport& SweepTable::at(std::size_t value_index, Mode mode,
                                    std::uint32_t repeat_index) const {
  // rows are laid out value-major, then repeat, then the two modes
  std::uint32_t repeats = 0;
  for (const auto& r : rows) repeats = std::max(repeats, r.repeat_index + 1);
  const std::size_t i = (value_index * repeats + repeat_index) * 2 +
                        (mode == Mode::kSemantic ? 0 : 1);
  if (i >= rows.size())
    throw Error(ErrorCode::kInvalidArgument, "sweep table index out of range");
  return rows[i].report;
}

Scenario point_scenario(const SweepSpec& spec, const SweepValue& value,
                        std::uint32_t repeat_index) {
  Scenario s = apply_value(spec.base, spec.variable, value);
  s.sim.seed += repeat_index;
  s.workload.seed = s.sim.seed;
  return s;
}

SweepTable run_sweep_serial(const SweepSpec& spec, const KnowledgeBase& kb) {
  validate(spec);
  const auto points = enumerate_points(spec);
  std::vector<MetricsReport> reports;
  reports.reserve(points.size());
  std::vector<Trace> traces(spec.values.size() * spec.repeat);
  for (const auto& p : points) {
    const SweepValue& value = spec.values[p.value];
    const Scenario s = point_scenario(spec, value, p.repeat);
    try {
      Trace& trace = traces[p.value * spec.repeat + p.repeat];
      if (p.mode == Mode::kSemantic) trace = trace_for(s, kb);
      reports.push_back(run_point(s, p.mode, kb, trace));
    } catch (...) {
      throw point_error(spec, value, p.mode, p.repeat, std::current_exception());
    }
  }
  return assemble(spec, points, std::move(reports));
}

SweepTable run_sweep(const SweepSpec& spec, const KnowledgeBase& kb, int jobs) {
  validate(spec);
  const auto points = enumerate_points(spec);
  const int n_traces = static_cast<int>(spec.values.size() * spec.repeat);
  const int n_points = static_cast<int>(points.size());
  if (jobs <= 0) jobs = omp_get_max_threads();

  std::vector<Trace> traces(static_cast<std::size_t>(n_traces));
  std::vector<std::exception_ptr> trace_errors(traces.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int i = 0; i < n_traces; ++i) {
    const auto v = static_cast<std::size_t>(i) / spec.repeat;
    const auto r = static_cast<std::uint32_t>(static_cast<std::size_t>(i) % spec.repeat);
    try {
      traces[static_cast<std::size_t>(i)] =
          trace_for(point_scenario(spec, spec.values[v], r), kb);
    } catch (...) {
      trace_errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < traces.size(); ++i)
    if (trace_errors[i])
      throw point_error(spec, spec.values[i / spec.repeat], Mode::kSemantic,
                        static_cast<std::uint32_t>(i % spec.repeat),
                        trace_errors[i]);

  std::vector<MetricsReport> reports(points.size());
  std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int i = 0; i < n_points; ++i) {
    const auto& p = points[static_cast<std::size_t>(i)];
    try {
      const Scenario s = point_scenario(spec, spec.values[p.value], p.repeat);
      reports[static_cast<std::size_t>(i)] =
          run_point(s, p.mode, kb, traces[p.value * spec.repeat + p.repeat]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    if (errors[i])
      throw point_error(spec, spec.values[points[i].value], points[i].mode,
                        points[i].repeat, errors[i]);
  return assemble(spec, points, std::move(reports));
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "variable,value,repeat," + csv_header() + "\n";
  for (const auto& row : table.rows)
    out += fmt::format("{},{},{},{}\n", to_string(table.variable),
                       to_string(row.value), row.repeat_index,
                       csv_row(row.report));
  return out;
}

std::string sweep_summary(const SweepTable& table) {
  std::string out = fmt::format("{:>14} {:>6} {:>10} {:>10} {:>10} {:>10} {:>9} {:>9}\n",
                                to_string(table.variable), "repeat", "sem_hit",
                                "trad_hit", "sem_lat", "trad_lat", "hit_inc%",
                                "lat_dec%");
  for (std::size_t i = 0; i + 1 < table.rows.size(); i += 2) {
    const auto& sem = table.rows[i].report;
    const auto& trad = table.rows[i + 1].report;
    const auto imp = improvement(sem, trad);
    out += fmt::format("{:>14} {:>6} {:>10.4f} {:>10.4f} {:>10.2f} {:>10.2f} {:>9} {:>9}\n",
                       to_string(table.rows[i].value), table.rows[i].repeat_index,
                       sem.hit_ratio, trad.hit_ratio, sem.mean_latency_ms,
                       trad.mean_latency_ms,
                       std::isinf(imp.hit_ratio_increase_pct)
                           ? std::string("inf")
                           : fmt::format("{:.1f}", imp.hit_ratio_increase_pct),
                       fmt::format("{:.1f}", imp.latency_decrease_pct));
  }
  return out;
}

}  // namespace semcache
