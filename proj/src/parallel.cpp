#include "ndas/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace ndas {
namespace {

int threads_from_env() {
  const char* env = std::getenv("NDAS_THREADS");
  if (env == nullptr) return 1;
  try {
    int value = std::stoi(env);
    return value > 0 ? value : 1;
  } catch (...) {
    return 1;
  }
}

std::atomic<int>& configured() {
  static std::atomic<int> threads{threads_from_env()};
  return threads;
}

}  // namespace

int thread_count() { return configured().load(std::memory_order_relaxed); }

void set_thread_count(int threads) {
  configured().store(threads > 0 ? threads : 1, std::memory_order_relaxed);
}

}  // namespace ndas
