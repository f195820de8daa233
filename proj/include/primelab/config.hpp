#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace primelab {

// Largest integer any operation accepts; leaves headroom for n + h and products.
inline constexpr std::uint64_t kMaxInput = std::uint64_t{1} << 62;

// Default sieve block, in integers covered.
inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;

// Name of the environment variable read for the initial memory budget (bytes).
inline constexpr std::string_view kMemoryBudgetEnv = "PRIMELAB_MEMORY_BUDGET";

std::uint64_t memory_budget();
void set_memory_budget(std::uint64_t bytes);

// Throws ResourceError naming the budget when `bytes` does not fit.
void require_budget(std::uint64_t bytes, std::string_view what);

std::uint64_t segment_size();
void set_segment_size(std::uint64_t entries);

// Worker cap for parallel reductions. 0 means hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);

// Throws ArgumentError when x exceeds kMaxInput.
void require_in_range(std::uint64_t x, std::string_view what);

}  // namespace primelab
