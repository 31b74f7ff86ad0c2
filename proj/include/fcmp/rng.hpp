#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fcmp {

// SplitMix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed for the stream identified by (seed, ids...). Distinct id tuples give
// statistically independent mt19937_64 streams.
std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

// Portable random source. The distributions are implemented here rather than
// taken from <random> so that draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> ids)
      : engine_(stream_seed(seed, ids)) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_pos() { return 1.0 - uniform(); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on {0, ..., n-1}, unbiased. n must be positive.
  std::uint64_t below(std::uint64_t n);
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  // Geometric on {1, 2, ...} with success probability p in (0, 1].
  std::uint64_t geometric(double p);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fcmp
