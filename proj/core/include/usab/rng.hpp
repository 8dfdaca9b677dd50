#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace usab {

/// Master seed for a run. Every random decision in the toolkit draws from a
/// stream derived from this seed and a pair of integer coordinates, so the
/// same RngSpec always reproduces the same trace.
struct RngSpec {
  std::uint64_t master_seed = 0;
};

/// splitmix64 finalizer chained over (seed, a, b).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept;

inline RngSpec substream(RngSpec spec, std::uint64_t a, std::uint64_t b = 0) noexcept {
  return RngSpec{derive_seed(spec.master_seed, a, b)};
}

/// mt19937_64 with hand-written distributions. The std distributions are not
/// specified bit-for-bit across standard libraries; these are.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(RngSpec spec) : engine_(spec.master_seed) {}

  static Rng stream(RngSpec spec, std::uint64_t a, std::uint64_t b = 0) {
    return Rng(derive_seed(spec.master_seed, a, b));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi);

  bool bernoulli(double p) { return uniform01() < p; }

  double normal(double mean = 0.0, double stddev = 1.0);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

  /// k distinct values from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace usab
