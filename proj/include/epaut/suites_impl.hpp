#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>

namespace epaut {

template <class T, class F>
std::vector<T> parallel_map(int count, int threads, F fn) {
  std::vector<std::optional<T>> out(count);
  const int workers = std::clamp(threads, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) out[i].emplace(fn(i));
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int i = next++; i < count; i = next++) out[i].emplace(fn(i));
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<T> result;
  result.reserve(count);
  for (auto& v : out) result.push_back(std::move(*v));
  return result;
}

}  // namespace epaut
