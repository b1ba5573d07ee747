#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "semcache/knowledge_base.hpp"
#include "semcache/metrics.hpp"
#include "semcache/netsim.hpp"
#include "semcache/workload.hpp"

namespace semcache {

// Everything needed to run one simulation. When `trace_path` is empty the
// trace is synthesized from `workload`.
struct Scenario {
  std::string kb_path;
  std::string trace_path;
  SimulationConfig sim;
  SyntheticSpec workload;
};

// Scenario file: `key = value` per line, '#' comments. Unknown keys and bad
// values throw kConfigError naming the key. See README for the key list.
Scenario parse_scenario(std::istream& in, Scenario base = {});
Scenario load_scenario_file(const std::string& path, Scenario base = {});
// Applies one key; shared by the file parser and command-line overrides.
void apply_setting(Scenario& s, const std::string& key, const std::string& value);
// Accepts plain bytes or a KB/MB/GB suffix (powers of 1000).
std::uint64_t parse_byte_size(const std::string& text);

// The bundled reference workload: 4 cells, 20 users, seed 42,
// p_follow 0.6, cache at the eNodeB.
Scenario reference_scenario(const std::string& kb_path);

// Trace used for a run: loaded from trace_path or generated.
Trace materialize_trace(const Scenario& s, const KnowledgeBase& kb);

enum class SweepVariable : std::uint8_t { kUserCount, kCacheSize, kCacheLocation };
std::string_view to_string(SweepVariable v);
bool parse_sweep_variable(std::string_view text, SweepVariable& out);

using SweepValue = std::variant<std::uint32_t, std::uint64_t, CacheLocation>;
std::string to_string(const SweepValue& v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::kCacheSize;
  std::vector<SweepValue> values;
  Scenario base;
  // Runs each point with seeds base.seed, base.seed + 1, ...
  std::uint32_t repeat = 1;
};

// Grids: users {1,2,5,10,20}; cache {5,10,20,50,100} MB; all locations.
std::vector<SweepValue> default_values(SweepVariable v);
// Throws kConfigError for an empty or type-inconsistent value list.
void validate(const SweepSpec& spec);

struct SweepRow {
  SweepValue value;
  std::uint32_t repeat_index = 0;
  MetricsReport report;
};

struct SweepTable {
  SweepVariable variable = SweepVariable::kCacheSize;
  // Ordered by (value, repeat, mode) with Semantic before Traditional.
  std::vector<SweepRow> rows;

  const MetricsReport& at(std::size_t value_index, Mode mode,
                          std::uint32_t repeat_index = 0) const;
};

// Scenario for one sweep point.
Scenario point_scenario(const SweepSpec& spec, const SweepValue& value,
                        std::uint32_t repeat_index);

// Both modes at every point, on identical traces. Points run in parallel
// across `jobs` OpenMP threads (0 = runtime default).
SweepTable run_sweep(const SweepSpec& spec, const KnowledgeBase& kb,
                     int jobs = 0);
// Single-threaded reference with the same output.
SweepTable run_sweep_serial(const SweepSpec& spec, const KnowledgeBase& kb);

std::string sweep_csv(const SweepTable& table);
std::string sweep_summary(const SweepTable& table);

}  // namespace semcache
