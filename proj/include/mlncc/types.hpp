#ifndef MLNCC_TYPES_HPP
#define MLNCC_TYPES_HPP

#include <chrono>
#include <cstdint>
#include <utility>

namespace mlncc {

using vertex_t = std::uint32_t;
using Edge = std::pair<vertex_t, vertex_t>;

// Monotonic wall-clock stopwatch; all reported timings use it.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace mlncc

#endif  // MLNCC_TYPES_HPP
