#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace treepath {

/// Vertex identifier. Vertices are numbered 1..n; 0 means "none".
using Vertex = std::uint32_t;
inline constexpr Vertex kNone = 0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default microtree size bound: max(1, floor(log2(n)^(1/3))).
inline std::size_t default_g(std::size_t n) {
  if (n < 2) return 1;
  double g = std::floor(std::cbrt(std::log2(static_cast<double>(n))));
  return g < 1.0 ? 1 : static_cast<std::size_t>(g);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace treepath
