#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace smoothring {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic child seed for a named sub-computation.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return splitmix64(seed ^ splitmix64(h));
}

/// Seeded generator with a platform-independent uniform draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double uniform(double lo, double hi) {
    double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  std::uint64_t next() { return engine_(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool coin() { return (engine_() >> 63) != 0; }

  std::vector<double> point(std::size_t n, double box) {
    std::vector<double> p(n);
    for (double& x : p) x = uniform(-box, box);
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

/// Session-wide numerical and search configuration.
struct Config {
  std::uint64_t seed = 0;
  double tol = 1e-9;
  std::size_t samples = 64;
  unsigned nmax = 4;
  std::size_t budget = 10000;
  /// Maximum template degree for certificate search.
  unsigned cert_degree = 2;
  /// Σ rᵢ² acceptance threshold for zero-set points.
  double zero_threshold = 1e-9;
  /// Sampling box [-box, box]ⁿ.
  double box = 3.0;
  /// Minimizers farther out are asymptotic (e.g. exp(x) as x → −∞), not zeros.
  double escape_radius = 30.0;
  double dedup_radius = 1e-6;
};

}  // namespace smoothring
