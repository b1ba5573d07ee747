#include <doctest.h>

#include <limits>
#include <random>

#include "semcache/error.hpp"
#include "semcache/experiments.hpp"
#include "semcache/netsim.hpp"
#include "support.hpp"

using namespace semcache;
using testing::error_of;
using testing::kb_from;
using testing::trace_from;

namespace {

// Store-and-forward over one idle link, in the same arithmetic order a
// hand-written schedule uses.
double hop(double t, double bytes, double delay, double bw = 1250.0) {
  return t + bytes / bw + delay;
}

SimulationConfig config(Mode mode) {
  SimulationConfig c;
  c.mode = mode;
  return c;
}

const char* kFigureTrace =
    "time_ms,user_id,cell_id,entity_iri\n"
    "0,0,0,wiki/Alice\n"
    "10000,0,0,wiki/Bob\n";

Trace random_trace(const KnowledgeBase& kb, std::mt19937_64& rng,
                   std::uint32_t cells) {
  Trace t;
  double now = 0;
  const auto& ids = kb.entities();
  const int n = 5 + static_cast<int>(rng() % 60);
  for (int i = 0; i < n; ++i) {
    // Mix of tight bursts and long gaps.
    now += (rng() % 4 == 0) ? static_cast<double>(rng() % 5)
                            : static_cast<double>(rng() % 3000);
    const auto user = static_cast<std::uint32_t>(rng() % 6);
    t.push_back({now, user, user % cells, ids[rng() % ids.size()]});
  }
  return t;
}

}  // namespace

TEST_CASE("transfer time") {
  CHECK(transfer_time({10, 1000}, 0) == 10.0);
  CHECK(transfer_time({10, 1000}, 5000) == 15.0);
  CHECK(transfer_time({3, std::numeric_limits<double>::infinity()}, 1 << 20) == 3.0);
}

TEST_CASE("back-to-back transfers serialize") {
  Link l({10, 1000});
  CHECK(l.send(0, 5000) == 15.0);
  CHECK(l.send(0, 5000) == 20.0);
  CHECK(l.bytes_carried() == 10000);
  // An idle link starts a transfer immediately.
  CHECK(l.send(100, 0) == 110.0);
}

TEST_CASE("single traditional request travels all four links") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto trace = trace_from("time_ms,user_id,cell_id,entity_iri\n0,0,0,wiki/Alice\n");
  const auto r = run_simulation(config(Mode::kTraditional), kb, trace);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].served_from == ServedFrom::kOrigin);

  double t = 0;
  for (double d : {10.0, 5.0, 5.0, 20.0}) t = hop(t, 40, d);
  CHECK(t == doctest::Approx(40.128));
  for (double d : {20.0, 5.0, 5.0, 10.0}) t = hop(t, 50000, d);
  CHECK(r.records[0].latency() == t);
  CHECK(t == doctest::Approx(240.128));
}

TEST_CASE("prefetched spouse is served from the eNodeB") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto trace = trace_from(kFigureTrace);

  const auto sem = run_simulation(config(Mode::kSemantic), kb, trace);
  REQUIRE(sem.records.size() == 2);
  CHECK(sem.records[0].served_from == ServedFrom::kOrigin);
  CHECK(sem.records[1].served_from == ServedFrom::kCache);

  // Alice: 40 + 24 bytes up to the origin, 50000 back.
  double a = 0;
  for (double d : {10.0, 5.0, 5.0, 20.0}) a = hop(a, 64, d);
  for (double d : {20.0, 5.0, 5.0, 10.0}) a = hop(a, 50000, d);
  CHECK(sem.records[0].latency() == a);

  // Bob: 40 + 16 bytes to the eNodeB and 25000 back.
  const double b = hop(hop(10000, 56, 10), 25000, 10);
  CHECK(sem.records[1].completed_at == b);
  CHECK(sem.records[1].latency() == b - 10000);
  CHECK(sem.report.hits == 1);
  CHECK(sem.report.prefetched_bytes == 25000);
  CHECK(sem.report.prefetched_bytes_hit == 25000);
  CHECK(sem.report.useless_prefetch_ratio == 0.0);

  const auto trad = run_simulation(config(Mode::kTraditional), kb, trace);
  CHECK(trad.records[1].served_from == ServedFrom::kOrigin);
  double tb = 10000;
  for (double d : {10.0, 5.0, 5.0, 20.0}) tb = hop(tb, 40, d);
  for (double d : {20.0, 5.0, 5.0, 10.0}) tb = hop(tb, 25000, d);
  CHECK(trad.records[1].completed_at == tb);
  CHECK(trad.report.hits == 0);
  CHECK(trad.report.prefetched_bytes == 0);
}

TEST_CASE("a request arriving during the prefetch joins it") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto trace = trace_from(
      "time_ms,user_id,cell_id,entity_iri\n0,0,0,wiki/Alice\n50,1,0,wiki/Bob\n");
  const auto r = run_simulation(config(Mode::kSemantic), kb, trace);
  CHECK(r.records[1].served_from == ServedFrom::kOrigin);
  CHECK(r.report.prefetched_bytes_hit == 25000);
  // Only two objects ever left the origin.
  CHECK(r.report.origin_bytes == 75000);
}

TEST_CASE("hit latency grows with distance of the cache") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto trace = trace_from(kFigureTrace);
  double prev = 0;
  for (auto loc : {CacheLocation::kENodeB, CacheLocation::kSGW, CacheLocation::kPGW}) {
    auto c = config(Mode::kSemantic);
    c.topology.cache_location = loc;
    const auto r = run_simulation(c, kb, trace);
    CHECK(r.records[1].served_from == ServedFrom::kCache);
    CHECK(r.records[1].latency() > prev);
    prev = r.records[1].latency();
  }
  CHECK(hops_to_cache(CacheLocation::kENodeB) == 1);
  CHECK(hops_to_cache(CacheLocation::kPGW) == 3);
}

TEST_CASE("with infinite bandwidth only propagation delay counts") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto trace = trace_from(kFigureTrace);
  auto c = config(Mode::kSemantic);
  const double inf = std::numeric_limits<double>::infinity();
  for (auto* l : {&c.topology.ue_enb, &c.topology.enb_sgw, &c.topology.sgw_pgw,
                  &c.topology.pgw_internet})
    l->bandwidth = inf;
  const auto sem = run_simulation(c, kb, trace);
  CHECK(sem.records[0].latency() == 80.0);
  CHECK(sem.records[1].latency() == 20.0);
  c.mode = Mode::kTraditional;
  const auto trad = run_simulation(c, kb, trace);
  CHECK(trad.records[0].latency() == 80.0);
  CHECK(trad.records[1].latency() == 80.0);
}

TEST_CASE("eNodeB placement gives each cell its own cache") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto trace = trace_from(
      "time_ms,user_id,cell_id,entity_iri\n0,0,0,wiki/Alice\n10000,1,1,wiki/Alice\n");
  auto c = config(Mode::kTraditional);
  c.topology.cells = 2;
  auto r = run_simulation(c, kb, trace);
  CHECK(r.caches.size() == 2);
  CHECK(r.records[1].served_from == ServedFrom::kOrigin);
  c.topology.cache_location = CacheLocation::kSGW;
  r = run_simulation(c, kb, trace);
  CHECK(r.caches.size() == 1);
  CHECK(r.records[1].served_from == ServedFrom::kCache);
}

TEST_CASE("null inference reproduces traditional hits and misses") {
  const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
  std::mt19937_64 rng(3);
  NullInference none;
  for (int i = 0; i < 30; ++i) {
    const std::uint32_t cells = 1 + static_cast<std::uint32_t>(rng() % 3);
    const auto trace = random_trace(kb, rng, cells);
    auto c = config(Mode::kSemantic);
    c.topology.cells = cells;
    c.topology.cache_capacity = 100000 + rng() % 2000000;
    const auto sem = run_simulation(c, kb, trace, &none);
    c.mode = Mode::kTraditional;
    const auto trad = run_simulation(c, kb, trace);
    REQUIRE(sem.records.size() == trad.records.size());
    for (std::size_t k = 0; k < sem.records.size(); ++k)
      CHECK(sem.records[k].served_from == trad.records[k].served_from);
    CHECK(sem.report.hits == trad.report.hits);
    CHECK(sem.report.prefetched_bytes == 0);
  }
}

TEST_CASE("a cache hit is never slower than the origin path") {
  const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
  NullInference none;
  int compared = 0;
  for (const auto& iri : kb.entities()) {
    const auto next = infer_next(kb, kb.descriptor_of(iri));
    if (next.empty()) continue;
    Trace trace = {{0, 0, 0, iri}, {60000, 0, 0, next.front().entity_iri}};
    const auto on = run_simulation(config(Mode::kSemantic), kb, trace);
    const auto off = run_simulation(config(Mode::kSemantic), kb, trace, &none);
    REQUIRE(on.records[1].served_from == ServedFrom::kCache);
    REQUIRE(off.records[1].served_from == ServedFrom::kOrigin);
    CHECK(on.records[1].latency() <= off.records[1].latency());
    ++compared;
  }
  CHECK(compared > 100);
}

TEST_CASE("identical inputs give identical results") {
  const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
  const auto s = reference_scenario(testing::data_path("reference_kb.txt"));
  const auto trace = materialize_trace(s, kb);
  const auto a = run_simulation(s.sim, kb, trace);
  const auto b = run_simulation(s.sim, kb, trace);
  CHECK(a.report == b.report);
  CHECK(a.records == b.records);
  CHECK(csv_row(a.report) == csv_row(b.report));
}

TEST_CASE("every request completes exactly once") {
  const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
  const auto s = reference_scenario(testing::data_path("reference_kb.txt"));
  const auto trace = materialize_trace(s, kb);
  for (auto mode : {Mode::kSemantic, Mode::kTraditional}) {
    auto c = s.sim;
    c.mode = mode;
    const auto r = run_simulation(c, kb, trace);
    REQUIRE(r.records.size() == trace.size());
    CHECK(r.report.requests_total == trace.size());
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      CHECK(r.records[i].request_id == i);
      CHECK(r.records[i].completed_at > r.records[i].issued_at);
      if (r.records[i].served_from == ServedFrom::kCache) ++hits;
    }
    CHECK(hits == r.report.hits);
    CHECK(r.report.hit_ratio >= 0.0);
    CHECK(r.report.hit_ratio <= 1.0);
    CHECK(r.report.useless_prefetch_ratio >= 0.0);
    CHECK(r.report.useless_prefetch_ratio <= 1.0);
    CHECK(r.report.prefetched_bytes_hit <= r.report.prefetched_bytes);
    for (const auto& cs : r.caches) CHECK(cs.used <= cs.capacity);
  }
}

TEST_CASE("simulation input errors") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto cfg = config(Mode::kSemantic);
  CHECK(error_of([&] {
          run_simulation(cfg, kb, {{5, 0, 0, "wiki/Alice"}, {1, 0, 0, "wiki/Bob"}});
        }) == ErrorCode::kUnsortedTrace);
  CHECK(error_of([&] { run_simulation(cfg, kb, {{0, 0, 0, "wiki/Nobody"}}); }) ==
        ErrorCode::kUnknownEntity);
  CHECK(error_of([&] { run_simulation(cfg, kb, {{-1, 0, 0, "wiki/Alice"}}); }) ==
        ErrorCode::kNegativeTime);
  CHECK(error_of([&] { run_simulation(cfg, kb, {{0, 0, 3, "wiki/Alice"}}); }) ==
        ErrorCode::kInvalidTrace);
  auto bad = cfg;
  bad.topology.cells = 0;
  CHECK(error_of([&] { run_simulation(bad, kb, {}); }) == ErrorCode::kInvalidTopology);
  bad = cfg;
  bad.topology.sgw_pgw.bandwidth = 0;
  CHECK(error_of([&] { run_simulation(bad, kb, {}); }) == ErrorCode::kInvalidTopology);
  bad = cfg;
  bad.topology.ue_enb.delay_ms = -1;
  CHECK(error_of([&] { run_simulation(bad, kb, {}); }) == ErrorCode::kInvalidTopology);
}

TEST_CASE("empty trace") {
  const auto kb = kb_from(testing::kFigureKb);
  const auto r = run_simulation(config(Mode::kSemantic), kb, {});
  CHECK(r.records.empty());
  CHECK(r.report.requests_total == 0);
  CHECK(r.report.hit_ratio == 0.0);
}

TEST_CASE("metadata overhead accounting") {
  SUBCASE("empty trace") {
    const auto kb = kb_from(testing::kFigureKb);
    const auto o = metadata_overhead({}, kb);
    CHECK(o.total_bytes == 0);
    CHECK(o.per_user_bytes == 0.0);
    CHECK(o.ratio_of_total_traffic == 0.0);
  }
  SUBCASE("20 requests with a 64-byte header") {
    const std::string iri = "wiki/" + std::string(50, 'x');
    const auto kb = kb_from("\"" + iri + "\" type Person\n\"" + iri + "\" size 1000\n");
    REQUIRE(wire_size(kb.descriptor_of(iri)) == 64);
    Trace trace;
    for (int i = 0; i < 20; ++i) trace.push_back({i * 10.0, 0, 0, iri});
    const auto o = metadata_overhead(trace, kb);
    CHECK(o.total_bytes == 1280);
    CHECK(o.per_user_bytes == 1280.0);
    CHECK(o.ratio_of_total_traffic == doctest::Approx(1280.0 / 20000.0));
    CHECK(metadata_overhead(trace, kb, 8).total_bytes == 20 * 56);
  }
  SUBCASE("reference workload is a tiny share of traffic") {
    const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
    const auto s = reference_scenario(testing::data_path("reference_kb.txt"));
    const auto o = metadata_overhead(materialize_trace(s, kb), kb);
    CHECK(o.ratio_of_total_traffic > 1e-5);
    CHECK(o.ratio_of_total_traffic < 1e-3);
  }
}

TEST_CASE("request records serialize as one JSON object per line") {
  RequestRecord r;
  r.request_id = 3;
  r.descriptor = {"wiki/Alice", EntityKind::kPerson};
  r.completed_at = 12.5;
  r.served_from = ServedFrom::kCache;
  const auto line = to_json_line(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find("\"request_id\":3") != std::string::npos);
  CHECK(line.find("\"served_from\":\"cache\"") != std::string::npos);
}
