#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace dirlat {

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Subsystem seeds are derived from one master seed so every randomized
// component is independently reproducible: seed_for("data.synth") etc.
inline uint64_t derive_seed(uint64_t master, std::string_view label) {
  return splitmix64(master ^ fnv1a64(label));
}

// Deterministic random source. mt19937_64 output is fully pinned by the
// standard; uniforms and normals are built from raw 64-bit words rather
// than std::*_distribution, whose streams are implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform on the open interval (0,1); never returns 0 or 1.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1p-52;
  }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::vector<double> uniforms(size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform01();
    return v;
  }

  std::vector<double> normals(size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
  }

  // Index below n without std::uniform_int_distribution (portability of the
  // stream matters more here than the negligible modulo bias).
  size_t index_below(size_t n) { return static_cast<size_t>(next_u64() % n); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index_below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dirlat
