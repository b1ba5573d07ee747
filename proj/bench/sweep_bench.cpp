// Times the OpenMP sweep against the serial reference on the reference
// workload. Usage: sweep_bench [repeat] [jobs]

#include <fmt/format.h>
#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <string>

#include "semcache/experiments.hpp"
#include "semcache/knowledge_base.hpp"

using namespace semcache;

template <typename F>
static double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int main(int argc, char** argv) {
  const std::uint32_t repeat = argc > 1 ? static_cast<std::uint32_t>(std::atoi(argv[1])) : 3;
  const int jobs = argc > 2 ? std::atoi(argv[2]) : 0;

  const std::string kb_path = std::string(SEMCACHE_DATA_DIR) + "/reference_kb.txt";
  const auto kb = KnowledgeBase::load_file(kb_path);

  SweepSpec spec;
  spec.variable = SweepVariable::kCacheSize;
  spec.values = default_values(spec.variable);
  spec.base = reference_scenario(kb_path);
  spec.repeat = repeat;

  SweepTable serial, parallel;
  const double ts = seconds([&] { serial = run_sweep_serial(spec, kb); });
  const double tp = seconds([&] { parallel = run_sweep(spec, kb, jobs); });
  const bool same = sweep_csv(serial) == sweep_csv(parallel);

  fmt::print("points      {} x {} repeats x 2 modes\n", spec.values.size(), repeat);
  fmt::print("threads     {}\n", jobs > 0 ? jobs : omp_get_max_threads());
  fmt::print("serial      {:.3f} s\n", ts);
  fmt::print("parallel    {:.3f} s\n", tp);
  fmt::print("speedup     {:.2f}x\n", tp > 0 ? ts / tp : 0.0);
  fmt::print("identical   {}\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
