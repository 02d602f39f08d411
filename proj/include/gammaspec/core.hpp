#pragma once

// Shared vocabulary for the whole library: element/index types, size limits,
// error types, and the deterministic worker-pool helper used by the heavy
// exhaustive scans.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gammaspec {

// Carrier elements and gamma parameters are small non-negative indices.
using Elem = int32_t;
using GammaIdx = int32_t;

struct Limits {
  // Soft caps enforced at construction time.  Carriers above 64 would break
  // the bitmask representation used by the ideal machinery, so max_carrier
  // may be raised per call site but never beyond 64.
  int max_carrier = 32;
  int max_gamma = 8;
  // Ideal enumeration is exhaustive over joins of principal ideals; this
  // separate cap keeps that lattice walk tractable.
  int max_enum_carrier = 16;
  int max_ideals = 4096;
  // Stalks and section spaces are enumerated class by class.
  int max_stalk_classes = 4096;
  // Candidate section families over an open form a product space, and tensor
  // presentations carry one generator per element pair; this caps both
  // exhaustive walks.
  int64_t max_section_space = int64_t{1} << 20;
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input data is malformed (bad dimensions, out-of-range entries, bad JSON).
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

// A configured size cap was exceeded; the message names the cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(what) {}
};

// A multiplicative system closure reached the additive zero.
class DegenerateSystem : public Error {
 public:
  explicit DegenerateSystem(const std::string& what) : Error(what) {}
};

// An internal consistency invariant failed (this signals a bug, not bad
// user input).
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

namespace detail {

inline int& thread_count_ref() {
  static int count = 1;
  return count;
}

}  // namespace detail

// Worker threads used by the exhaustive scans.  Results never depend on this
// value: every parallel scan merges per-chunk results in chunk order.
inline void set_thread_count(int n) {
  detail::thread_count_ref() = n < 1 ? 1 : n;
}

inline int thread_count() { return detail::thread_count_ref(); }

namespace detail {

// Splits [0, total) into contiguous chunks, runs `body(chunk_index, begin,
// end)` on the pool, and returns when all chunks are done.  Chunk boundaries
// depend only on `total` and the thread count; callers that collect results
// per chunk and concatenate in chunk order are deterministic by construction.
inline void parallel_chunks(
    int64_t total, const std::function<void(int, int64_t, int64_t)>& body) {
  const int workers = thread_count();
  if (workers <= 1 || total < 4096) {
    body(0, 0, total);
    return;
  }
  const int chunks = workers;
  std::vector<std::thread> pool;
  pool.reserve(chunks);
  for (int c = 0; c < chunks; ++c) {
    const int64_t begin = total * c / chunks;
    const int64_t end = total * (c + 1) / chunks;
    pool.emplace_back([&body, c, begin, end] { body(c, begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

}  // namespace gammaspec
