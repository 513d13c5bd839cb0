#pragma once

#include <cstdint>

namespace pcopt {

/// Counter-based random stream: output k of stream (seed, index) is a pure
/// function of the triple, so samples can be drawn in any order or on any
/// thread and still agree bitwise.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index) : seed_(seed), index_(index) {}

  std::uint64_t next_u64();

  /// Uniform on (0, 1], 53-bit resolution.
  double next_open01();

  /// Standard normal by Box-Muller on two consecutive outputs.
  double normal_draw();

  /// Uniform on [-1, 1] from one output.
  double uniform_draw();

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t counter_ = 0;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

}  // namespace pcopt
