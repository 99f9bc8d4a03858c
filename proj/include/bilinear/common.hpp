#pragma once

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bilinear {

using cd = std::complex<double>;

// Violated operation contract (caller broke a stated precondition between
// typed values, e.g. a shape or inclusion hypothesis).
struct contract_error : std::logic_error {
  explicit contract_error(const std::string& what) : std::logic_error(what) {}
};

inline int env_thread_cap() {
  if (const char* s = std::getenv("BF_THREADS")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// Static block partition; results must be written to disjoint slots so that
// aggregation order stays deterministic.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  int workers = env_thread_cap();
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  if (static_cast<std::size_t>(workers) > count) workers = static_cast<int>(count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += workers) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline std::size_t ipow(std::size_t base, unsigned exp) {
  std::size_t r = 1;
  while (exp--) r *= base;
  return r;
}

}  // namespace bilinear
