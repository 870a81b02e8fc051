#include "nepdf/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace nepdf {

int worker_count() {
  int cap = 0;
  if (const char* env = std::getenv("NEPDF_THREADS")) {
    try {
      cap = std::stoi(env);
    } catch (...) {
      cap = 0;
    }
  }
  if (cap <= 0) cap = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, cap);
}

void parallel_for_chunks(int n, const std::function<void(int, int, int)>& fn) {
  if (n <= 0) return;
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const int chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, w, begin, end] { fn(w, begin, end); });
  }
  for (auto& t : pool) t.join();
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  parallel_for_chunks(n, [&fn](int, int begin, int end) {
    for (int i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace nepdf
