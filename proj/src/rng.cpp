#include "pcopt/rng.hpp"

#include <cmath>
#include <numbers>

namespace pcopt {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SampleStream::next_u64() {
  const std::uint64_t key = mix64(seed_ + 0x9e3779b97f4a7c15ULL) ^ mix64(index_ * 0xd1b54a32d192ed03ULL + 1);
  return mix64(key + (counter_++ + 1) * 0x9e3779b97f4a7c15ULL);
}

double SampleStream::next_open01() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double SampleStream::normal_draw() {
  const double u1 = next_open01();
  const double u2 = next_open01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SampleStream::uniform_draw() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-52 - 1.0;
}

}  // namespace pcopt
