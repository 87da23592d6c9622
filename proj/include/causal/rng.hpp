#ifndef CAUSAL_RNG_HPP
#define CAUSAL_RNG_HPP

#include <cstdint>
#include <cstddef>

namespace causal {

// Deterministic counter-based generator built on SplitMix64
// (Steele, Lea & Flood, "Fast splittable pseudorandom number generators",
// OOPSLA 2014). A (seed, stream) pair fully determines every draw, and
// substreams derived via derive() are statistically independent, so
// replications can run in any order or in parallel with identical results.
// The algorithm uses only 64-bit integer arithmetic and IEEE doubles, so
// sequences reproduce bit-for-bit across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform01();

  // Uniform on {0, ..., n-1}. n must be positive.
  std::size_t uniform_index(std::size_t n);

  bool bernoulli(double p);

  // Box-Muller; pairs of draws share one transform.
  double normal(double mean = 0.0, double stddev = 1.0);

  // Independent substream indexed by `index`, rooted at this generator's
  // (seed, stream) identity rather than its current position.
  Rng derive(std::uint64_t index) const;

 private:
  Rng() = default;

  std::uint64_t origin_;  // fixed at construction, used by derive()
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace causal

#endif
