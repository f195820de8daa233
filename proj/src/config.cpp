#include "primelab/config.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>

#include "primelab/errors.hpp"

namespace primelab {
namespace {

constexpr std::uint64_t kDefaultBudget = std::uint64_t{4} << 30;

std::uint64_t initial_budget() {
  const char* env = std::getenv(std::string(kMemoryBudgetEnv).c_str());
  if (env == nullptr || *env == '\0') return kDefaultBudget;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || v == 0) return kDefaultBudget;
  switch (*end) {
    case 'k': case 'K': v <<= 10; break;
    case 'm': case 'M': v <<= 20; break;
    case 'g': case 'G': v <<= 30; break;
    default: break;
  }
  return v;
}

std::atomic<std::uint64_t>& budget_ref() {
  static std::atomic<std::uint64_t> budget{initial_budget()};
  return budget;
}

std::atomic<std::uint64_t> g_segment{kDefaultSegmentSize};
std::atomic<unsigned> g_threads{0};

}  // namespace

std::uint64_t memory_budget() { return budget_ref().load(); }
void set_memory_budget(std::uint64_t bytes) { budget_ref().store(bytes); }

void require_budget(std::uint64_t bytes, std::string_view what) {
  const auto limit = memory_budget();
  if (bytes > limit) {
    throw ResourceError(std::string(what) + " needs " + std::to_string(bytes) +
                        " bytes, exceeding the memory budget of " + std::to_string(limit) +
                        " bytes (" + std::string(kMemoryBudgetEnv) + ")");
  }
}

std::uint64_t segment_size() { return g_segment.load(); }
void set_segment_size(std::uint64_t entries) {
  if (entries < 128) throw ArgumentError("segment size must be at least 128");
  g_segment.store(entries);
}

unsigned thread_count() {
  unsigned n = g_threads.load();
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}
void set_thread_count(unsigned n) { g_threads.store(n); }

void require_in_range(std::uint64_t x, std::string_view what) {
  if (x > kMaxInput) {
    throw ArgumentError(std::string(what) + " = " + std::to_string(x) +
                        " exceeds the supported range 2^62");
  }
}

}  // namespace primelab
