#include <doctest.h>

#include <cmath>
#include <sstream>

#include "semcache/error.hpp"
#include "semcache/experiments.hpp"
#include "support.hpp"

using namespace semcache;
using testing::error_of;

namespace {

MetricsReport report(Mode mode, double hit_ratio, double latency) {
  MetricsReport r;
  r.mode = mode;
  r.requests_total = 100;
  r.hit_ratio = hit_ratio;
  r.mean_latency_ms = latency;
  return r;
}

Scenario small_reference() {
  auto s = reference_scenario(testing::data_path("reference_kb.txt"));
  s.workload.n_users = 6;
  return s;
}

}  // namespace

TEST_CASE("improvement arithmetic") {
  const auto i = improvement(report(Mode::kSemantic, 0.50, 80),
                             report(Mode::kTraditional, 0.22, 100));
  CHECK(i.hit_ratio_increase_pct == doctest::Approx(127.2727).epsilon(1e-5));
  CHECK(i.latency_decrease_pct == doctest::Approx(20.0));

  const auto same = improvement(report(Mode::kSemantic, 0.3, 50),
                                report(Mode::kTraditional, 0.3, 50));
  CHECK(same.hit_ratio_increase_pct == 0.0);
  CHECK(same.latency_decrease_pct == 0.0);

  const auto zero = improvement(report(Mode::kSemantic, 0.1, 50),
                                report(Mode::kTraditional, 0.0, 50));
  CHECK(std::isinf(zero.hit_ratio_increase_pct));
  CHECK(format_number(zero.hit_ratio_increase_pct) == "inf");

  auto other = report(Mode::kTraditional, 0.2, 50);
  other.users = 3;
  CHECK(error_of([&] { improvement(report(Mode::kSemantic, 0.1, 50), other); }) ==
        ErrorCode::kScenarioMismatch);
}

TEST_CASE("scenario files") {
  std::istringstream in(
      "# comment\n"
      "kb = kb.txt\n"
      "mode = traditional\n"
      "cache_location = S-GW\n"
      "cache_size = 5MB\n"
      "cells = 3\n"
      "users = 4\n"
      "p_follow = 0.25\n"
      "ue_enb_delay_ms = 2.5\n"
      "bandwidth = 100\n"
      "replacement = fifo\n");
  const auto s = parse_scenario(in, {});
  CHECK(s.kb_path == "kb.txt");
  CHECK(s.sim.mode == Mode::kTraditional);
  CHECK(s.sim.topology.cache_location == CacheLocation::kSGW);
  CHECK(s.sim.topology.cache_capacity == 5'000'000);
  CHECK(s.sim.topology.cells == 3);
  CHECK(s.workload.cells == 3);
  CHECK(s.workload.n_users == 4);
  CHECK(s.workload.p_follow == 0.25);
  CHECK(s.sim.topology.ue_enb.delay_ms == 2.5);
  CHECK(s.sim.topology.pgw_internet.bandwidth == 100.0);
  CHECK(s.sim.topology.replacement == Replacement::kFifo);
}

TEST_CASE("scenario errors name the key") {
  auto message_of = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      parse_scenario(in, {});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfigError);
      return e.what();
    }
    return "";
  };
  CHECK(message_of("colour = blue\n").find("colour") != std::string::npos);
  CHECK(message_of("cache_size = lots\n").find("cache_size") != std::string::npos);
  CHECK(message_of("mode = fancy\n").find("mode") != std::string::npos);
  CHECK(message_of("p_follow = 2\n").find("p_follow") != std::string::npos);
  CHECK(message_of("seed\n").find("line 1") != std::string::npos);
}

TEST_CASE("byte sizes") {
  CHECK(parse_byte_size("1234") == 1234);
  CHECK(parse_byte_size("20MB") == 20'000'000);
  CHECK(parse_byte_size("3 KB") == 3000);
  CHECK(parse_byte_size("1GB") == 1'000'000'000);
  CHECK(error_of([] { parse_byte_size("1.5.MB"); }) == ErrorCode::kConfigError);
  CHECK(error_of([] { parse_byte_size(""); }) == ErrorCode::kConfigError);
}

TEST_CASE("sweep specs are validated") {
  SweepSpec spec;
  spec.variable = SweepVariable::kCacheSize;
  CHECK(error_of([&] { validate(spec); }) == ErrorCode::kConfigError);
  spec.values = {SweepValue(CacheLocation::kSGW)};
  CHECK(error_of([&] { validate(spec); }) == ErrorCode::kConfigError);
  spec.values = default_values(SweepVariable::kCacheSize);
  CHECK_NOTHROW(validate(spec));
  CHECK(default_values(SweepVariable::kUserCount).size() == 5);
  CHECK(default_values(SweepVariable::kCacheLocation).size() == 3);
}

TEST_CASE("parallel sweep equals the serial reference") {
  const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
  SweepSpec spec;
  spec.variable = SweepVariable::kCacheLocation;
  spec.values = default_values(spec.variable);
  spec.base = small_reference();
  spec.repeat = 2;
  const auto serial = run_sweep_serial(spec, kb);
  const auto parallel = run_sweep(spec, kb, 3);
  REQUIRE(serial.rows.size() == 3 * 2 * 2);
  REQUIRE(parallel.rows.size() == serial.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(parallel.rows[i].value == serial.rows[i].value);
    CHECK(parallel.rows[i].repeat_index == serial.rows[i].repeat_index);
    CHECK(parallel.rows[i].report == serial.rows[i].report);
  }
  CHECK(sweep_csv(parallel) == sweep_csv(serial));
  CHECK(serial.at(1, Mode::kTraditional, 1).seed == spec.base.sim.seed + 1);
  CHECK(serial.at(2, Mode::kSemantic).cache_location == CacheLocation::kPGW);
}

TEST_CASE("single-point sweep equals a direct run") {
  const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
  SweepSpec spec;
  spec.variable = SweepVariable::kCacheSize;
  spec.values = {SweepValue(std::uint64_t{10'000'000})};
  spec.base = small_reference();
  const auto table = run_sweep(spec, kb);

  auto s = spec.base;
  s.sim.topology.cache_capacity = 10'000'000;
  const auto trace = materialize_trace(s, kb);
  for (auto mode : {Mode::kSemantic, Mode::kTraditional}) {
    s.sim.mode = mode;
    CHECK(table.at(0, mode) == run_simulation(s.sim, kb, trace).report);
  }
}

TEST_CASE("user-count sweep uses the requested population") {
  const auto kb = KnowledgeBase::load_file(testing::data_path("reference_kb.txt"));
  SweepSpec spec;
  spec.variable = SweepVariable::kUserCount;
  spec.values = {SweepValue(std::uint32_t{1}), SweepValue(std::uint32_t{3})};
  spec.base = small_reference();
  const auto table = run_sweep_serial(spec, kb);
  CHECK(table.at(0, Mode::kSemantic).users == 1);
  CHECK(table.at(1, Mode::kTraditional).users == 3);
}

TEST_CASE("sweep errors name the point") {
  const auto kb = testing::kb_from(testing::kFigureKb);
  SweepSpec spec;
  spec.variable = SweepVariable::kCacheSize;
  spec.values = {SweepValue(std::uint64_t{1000})};
  spec.base.trace_path = "/nonexistent/trace.csv";
  try {
    run_sweep(spec, kb);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("cache_size") != std::string::npos);
  }
}

TEST_CASE("sweep CSV layout") {
  SweepTable t;
  t.variable = SweepVariable::kCacheLocation;
  t.rows.push_back({SweepValue(CacheLocation::kSGW), 0, report(Mode::kSemantic, 0.5, 1)});
  const auto csv = sweep_csv(t);
  CHECK(csv.rfind("variable,value,repeat," + csv_header() + "\n", 0) == 0);
  CHECK(csv.find("\ncache_location,sgw,0,semantic,") != std::string::npos);
}
