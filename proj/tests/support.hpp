#pragma once

#include <sstream>
#include <string>

#include "semcache/error.hpp"
#include "semcache/knowledge_base.hpp"
#include "semcache/workload.hpp"

namespace testing {

inline semcache::KnowledgeBase kb_from(const std::string& text) {
  std::istringstream in(text);
  return semcache::KnowledgeBase::load(in);
}

inline semcache::Trace trace_from(const std::string& text) {
  std::istringstream in(text);
  return semcache::load_trace(in);
}

// Alice (Person, 50000 B) is married to Bob (Person, 25000 B); one series
// starring both.
inline const char* kFigureKb = R"(
"wiki/Alice" type Person
"wiki/Alice" size 50000
"wiki/Bob" type Person
"wiki/Bob" size 25000
"wiki/Alice" spouse "wiki/Bob"
"wiki/Bob" spouse "wiki/Alice"
"wiki/Show" type TVSeries
"wiki/Show" size 80000
"wiki/Show" starring "wiki/Bob"
"wiki/Show" starring "wiki/Alice"
)";

// n people in a directed spouse cycle: p00 -> p01 -> ... -> p(n-1) -> p00.
inline std::string chain_kb_text(int n, int size = 30000) {
  std::string out;
  auto name = [](int i) {
    std::string s = std::to_string(i);
    return "wiki/P" + std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
  };
  for (int i = 0; i < n; ++i) {
    out += "\"" + name(i) + "\" type Person\n";
    out += "\"" + name(i) + "\" size " + std::to_string(size + 100 * i) + "\n";
    out += "\"" + name(i) + "\" spouse \"" + name((i + 1) % n) + "\"\n";
  }
  return out;
}

template <typename F>
semcache::ErrorCode error_of(F&& fn) {
  try {
    fn();
  } catch (const semcache::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a semcache::Error");
}

inline std::string data_path(const std::string& name) {
  return std::string(SEMCACHE_DATA_DIR) + "/" + name;
}

}  // namespace testing
