#include "semcache/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "semcache/error.hpp"
#include "semcache/experiments.hpp"
#include "semcache/knowledge_base.hpp"
#include "semcache/metadata_codec.hpp"
#include "semcache/netsim.hpp"
#include "semcache/workload.hpp"

namespace semcache::cli {

namespace {

// Flags that mirror scenario-file keys.
struct Override {
  const char* flag;
  const char* key;
  const char* help;
  std::string value;
  CLI::Option* option = nullptr;
};

std::string render_setting(const Scenario& s, std::string_view key) {
  const auto& t = s.sim.topology;
  const auto& w = s.workload;
  if (key == "kb") return s.kb_path;
  if (key == "trace") return s.trace_path;
  if (key == "mode") return std::string(to_string(s.sim.mode));
  if (key == "seed") return std::to_string(s.sim.seed);
  if (key == "cells") return std::to_string(t.cells);
  if (key == "users") return std::to_string(w.n_users);
  if (key == "requests_min") return std::to_string(w.requests_min);
  if (key == "requests_max") return std::to_string(w.requests_max);
  if (key == "p_follow") return fmt::format("{}", w.p_follow);
  if (key == "gap_min_ms") return fmt::format("{}", w.gap.min_ms);
  if (key == "gap_max_ms") return fmt::format("{}", w.gap.max_ms);
  if (key == "cache_location") return std::string(to_string(t.cache_location));
  if (key == "cache_size") return std::to_string(t.cache_capacity);
  if (key == "replacement") return std::string(to_string(t.replacement));
  if (key == "max_prefetch") return std::to_string(s.sim.max_prefetch);
  if (key == "request_bytes") return std::to_string(s.sim.request_bytes);
  if (key == "bandwidth") return fmt::format("{}", t.ue_enb.bandwidth);
  return {};
}

std::vector<Override> scenario_overrides() {
  return {
      {"--kb", "kb", "Knowledge base file", {}},
      {"--trace", "trace", "Trace CSV (generated from the workload settings when absent)", {}},
      {"--mode", "mode", "semantic | traditional", {}},
      {"--seed", "seed", "Seed (falls back to $SEMCACHE_SEED)", {}},
      {"--cells", "cells", "Number of eNodeBs", {}},
      {"--users", "users", "Synthetic users", {}},
      {"--requests-min", "requests_min", "Fewest requests per user", {}},
      {"--requests-max", "requests_max", "Most requests per user", {}},
      {"--p-follow", "p_follow", "Probability a request follows an inferred relation", {}},
      {"--gap-min-ms", "gap_min_ms", "Shortest inter-request gap", {}},
      {"--gap-max-ms", "gap_max_ms", "Longest inter-request gap", {}},
      {"--cache-location", "cache_location", "enodeb | sgw | pgw", {}},
      {"--cache-size", "cache_size", "Cache capacity per cache (bytes, or KB/MB/GB)", {}},
      {"--replacement", "replacement", "lru | fifo", {}},
      {"--max-prefetch", "max_prefetch", "Prefetches per request, 0 = unlimited", {}},
      {"--request-bytes", "request_bytes", "Request size without metadata", {}},
      {"--bandwidth", "bandwidth", "Bandwidth of every link in bytes/ms", {}},
  };
}

void add_overrides(CLI::App* cmd, std::vector<Override>& overrides,
                   std::vector<std::string>& settings, std::string& scenario_path) {
  const Scenario defaults;
  cmd->add_option("--scenario", scenario_path, "Scenario file (key = value lines)");
  for (auto& o : overrides) {
    o.option = cmd->add_option(o.flag, o.value, o.help);
    const auto d = render_setting(defaults, o.key);
    if (!d.empty()) o.option->default_str(d);
  }
  cmd->add_option("--set", settings, "Any scenario setting as key=value (repeatable)");
}

Scenario build_scenario(const std::string& scenario_path,
                        const std::vector<Override>& overrides,
                        const std::vector<std::string>& settings) {
  Scenario s;
  if (const char* env = std::getenv("SEMCACHE_SEED"); env && *env)
    apply_setting(s, "seed", env);
  if (!scenario_path.empty()) s = load_scenario_file(scenario_path, s);
  for (const auto& kv : settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::kConfigError,
                  fmt::format("set: expected key=value, got '{}'", kv));
    apply_setting(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& o : overrides)
    if (o.option->count() > 0) apply_setting(s, o.key, o.value);
  return s;
}

void require_readable(const std::string& path, const char* field) {
  if (path.empty())
    throw Error(ErrorCode::kConfigError, fmt::format("{}: no path given", field));
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kConfigError,
                fmt::format("{}: cannot open '{}'", field, path));
}

// Writes through a temporary file so that a failure never leaves a partial
// output behind.
void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::kConfigError,
                  fmt::format("out: cannot write '{}'", path));
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error(ErrorCode::kConfigError,
                  fmt::format("out: failed writing '{}'", path));
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::kConfigError,
                fmt::format("out: cannot rename onto '{}'", path));
  }
}

struct SimulateArgs {
  std::string scenario;
  std::vector<Override> overrides = scenario_overrides();
  std::vector<std::string> settings;
  std::string out;
  std::string records;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const Scenario s = build_scenario(a.scenario, a.overrides, a.settings);
  require_readable(s.kb_path, "kb");
  if (!s.trace_path.empty()) require_readable(s.trace_path, "trace");
  validate(s.sim.topology);
  if (s.trace_path.empty()) validate(s.workload);

  const auto kb = KnowledgeBase::load_file(s.kb_path);
  const auto trace = materialize_trace(s, kb);
  const auto result = run_simulation(s.sim, kb, trace);

  const std::string csv = csv_header() + "\n" + csv_row(result.report) + "\n";
  std::string jsonl;
  if (!a.records.empty())
    for (const auto& r : result.records) jsonl += to_json_line(r) + "\n";

  if (!a.out.empty()) write_atomically(a.out, csv);
  if (!a.records.empty()) write_atomically(a.records, jsonl);
  out << summary(result.report);
  if (a.out.empty()) out << csv;
  return kExitOk;
}

struct SweepArgs {
  std::string scenario;
  std::vector<Override> overrides = scenario_overrides();
  std::vector<std::string> settings;
  std::string variable = "cache_size";
  std::vector<std::string> values;
  std::string out;
  int jobs = 0;
  std::uint32_t repeat = 1;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepSpec spec;
  if (!parse_sweep_variable(a.variable, spec.variable))
    throw Error(ErrorCode::kConfigError,
                fmt::format("variable: unknown sweep variable '{}'", a.variable));
  spec.base = build_scenario(a.scenario, a.overrides, a.settings);
  spec.repeat = a.repeat;
  if (a.values.empty()) {
    spec.values = default_values(spec.variable);
  } else {
    for (const auto& v : a.values) {
      try {
        switch (spec.variable) {
          case SweepVariable::kUserCount:
            spec.values.emplace_back(static_cast<std::uint32_t>(std::stoul(v)));
            break;
          case SweepVariable::kCacheSize:
            spec.values.emplace_back(parse_byte_size(v));
            break;
          case SweepVariable::kCacheLocation: {
            CacheLocation loc{};
            if (!parse_cache_location(v, loc)) throw std::invalid_argument(v);
            spec.values.emplace_back(loc);
            break;
          }
        }
      } catch (const std::exception&) {
        throw Error(ErrorCode::kConfigError,
                    fmt::format("values: '{}' is not valid for {}", v, a.variable));
      }
    }
  }
  require_readable(spec.base.kb_path, "kb");
  if (!spec.base.trace_path.empty()) require_readable(spec.base.trace_path, "trace");
  validate(spec);

  const auto kb = KnowledgeBase::load_file(spec.base.kb_path);
  const auto table = run_sweep(spec, kb, a.jobs);
  const std::string csv = sweep_csv(table);
  if (!a.out.empty()) write_atomically(a.out, csv);
  out << sweep_summary(table);
  if (a.out.empty()) out << csv;
  return kExitOk;
}

struct GenTraceArgs {
  std::string kb;
  std::string out;
  SyntheticSpec spec;
  bool seed_given = false;
};

int cmd_gen_trace(GenTraceArgs a, std::ostream& out) {
  require_readable(a.kb, "kb");
  if (!a.seed_given)
    if (const char* env = std::getenv("SEMCACHE_SEED"); env && *env) {
      Scenario tmp;
      apply_setting(tmp, "seed", env);
      a.spec.seed = tmp.sim.seed;
    }
  validate(a.spec);
  const auto kb = KnowledgeBase::load_file(a.kb);
  const auto trace = generate_trace(kb, a.spec);
  std::ostringstream buf;
  write_trace(buf, trace);
  if (a.out.empty()) {
    out << buf.str();
  } else {
    write_atomically(a.out, buf.str());
    out << fmt::format("wrote {} requests to {}\n", trace.size(), a.out);
  }
  return kExitOk;
}

int cmd_validate_kb(const std::string& path, std::ostream& out) {
  require_readable(path, "kb");
  const auto kb = KnowledgeBase::load_file(path);
  std::size_t people = 0;
  std::size_t series = 0;
  std::uint64_t bytes = 0;
  for (const auto& iri : kb.entities()) {
    (kb.kind_of(iri) == EntityKind::kPerson ? people : series)++;
    bytes += kb.content_size_of(iri);
  }
  out << fmt::format("{}: ok\n", path);
  out << fmt::format("entities  {} ({} Person, {} TVSeries)\n", kb.entity_count(),
                     people, series);
  out << fmt::format("spouse    {}\n", kb.count(Predicate::kSpouse));
  out << fmt::format("starring  {}\n", kb.count(Predicate::kStarring));
  out << fmt::format("content   {} bytes\n", bytes);
  return kExitOk;
}

struct CodecArgs {
  std::string iri;
  std::string kind = "Person";
  std::string hex;
  std::string option_type = "0x1e";
};

CodecOptions codec_options(const CodecArgs& a) {
  CodecOptions opts;
  try {
    const auto v = std::stoul(a.option_type, nullptr, 0);
    if (v > 0xFF || v <= kPadN) throw std::out_of_range(a.option_type);
    opts.option_type = static_cast<std::uint8_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("option-type: '{}' is not a usable option type",
                            a.option_type));
  }
  return opts;
}

int cmd_codec_encode(const CodecArgs& a, std::ostream& out) {
  MetadataDescriptor d;
  d.entity_iri = a.iri;
  if (!parse_entity_kind(a.kind, d.entity_kind))
    throw Error(ErrorCode::kConfigError,
                fmt::format("kind: expected Person, TVSeries or Other, got '{}'",
                            a.kind));
  out << to_hex(to_bytes(encode_metadata(d, codec_options(a)))) << "\n";
  return kExitOk;
}

int cmd_codec_decode(const CodecArgs& a, std::ostream& out) {
  const auto header = parse_header(from_hex(a.hex));
  const auto d = decode_metadata(header, codec_options(a));
  out << fmt::format("kind: {}\niri: {}\nwire_size: {}\n", to_string(d.entity_kind),
                     d.entity_iri, header.declared_size());
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic in-network caching and prefetching simulator", "semcache"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one simulation");
  add_overrides(simulate, sim.overrides, sim.settings, sim.scenario);
  simulate->add_option("--out", sim.out, "Write the metrics CSV here");
  simulate->add_option("--records", sim.records, "Write per-request JSON lines here");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep in both modes");
  add_overrides(sweep, sw.overrides, sw.settings, sw.scenario);
  sweep->add_option("--variable", sw.variable, "users | cache_size | cache_location")
      ->capture_default_str();
  sweep->add_option("--values", sw.values, "Comma separated values (default grid when absent)")
      ->delimiter(',');
  sweep->add_option("--jobs", sw.jobs, "Parallel sweep points, 0 = all cores")
      ->capture_default_str();
  sweep->add_option("--repeat", sw.repeat, "Repetitions with consecutive seeds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", sw.out, "Write the sweep CSV here");

  GenTraceArgs gen;
  auto* gen_trace = app.add_subcommand("gen-trace", "Synthesize a request trace");
  gen_trace->add_option("--kb", gen.kb, "Knowledge base file");
  gen_trace->add_option("--out", gen.out, "Output CSV (stdout when absent)");
  gen_trace->add_option("--users", gen.spec.n_users, "Users")->capture_default_str();
  gen_trace->add_option("--requests-min", gen.spec.requests_min, "Fewest requests per user")
      ->capture_default_str();
  gen_trace->add_option("--requests-max", gen.spec.requests_max, "Most requests per user")
      ->capture_default_str();
  gen_trace->add_option("--p-follow", gen.spec.p_follow, "Follow probability")
      ->capture_default_str();
  gen_trace->add_option("--gap-min-ms", gen.spec.gap.min_ms, "Shortest gap")
      ->capture_default_str();
  gen_trace->add_option("--gap-max-ms", gen.spec.gap.max_ms, "Longest gap")
      ->capture_default_str();
  gen_trace->add_option("--cells", gen.spec.cells, "Cells (round-robin assignment)")
      ->capture_default_str();
  auto* gen_seed = gen_trace->add_option("--seed", gen.spec.seed,
                                         "Seed (falls back to $SEMCACHE_SEED)")
                       ->capture_default_str();

  std::string kb_to_check;
  auto* validate_kb = app.add_subcommand("validate-kb", "Load a knowledge base and report");
  validate_kb->add_option("kb,--kb", kb_to_check, "Knowledge base file");

  CodecArgs codec_args;
  auto* codec = app.add_subcommand("codec", "Hop-by-hop metadata codec");
  codec->require_subcommand(1);
  auto* encode = codec->add_subcommand("encode", "Descriptor to header hex");
  encode->add_option("--iri", codec_args.iri, "Entity IRI")->required();
  encode->add_option("--kind", codec_args.kind, "Person | TVSeries | Other")
      ->capture_default_str();
  encode->add_option("--option-type", codec_args.option_type, "Metadata option type")
      ->capture_default_str();
  auto* decode = codec->add_subcommand("decode", "Header hex to descriptor");
  decode->add_option("hex,--hex", codec_args.hex, "Header bytes in hex")->required();
  decode->add_option("--option-type", codec_args.option_type, "Metadata option type")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (sweep->parsed()) return cmd_sweep(sw, out);
    if (gen_trace->parsed()) {
      gen.seed_given = gen_seed->count() > 0;
      return cmd_gen_trace(gen, out);
    }
    if (validate_kb->parsed()) return cmd_validate_kb(kb_to_check, out);
    if (encode->parsed()) return cmd_codec_encode(codec_args, out);
    if (decode->parsed()) return cmd_codec_decode(codec_args, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kConfigError ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace semcache::cli
