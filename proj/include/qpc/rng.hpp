#ifndef QPC_RNG_HPP
#define QPC_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace qpc {

/// Seeded random source. The engine is std::mt19937_64, whose output sequence
/// is fixed by the standard; all derived draws (doubles, bounded integers,
/// shuffles) are computed here rather than through <random> distributions so
/// that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  int bit() { return static_cast<int>(next() >> 63); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniformly random k-subset of {0..n-1}, returned sorted.
  std::vector<std::size_t> choose(std::size_t n, std::size_t k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Named random streams within one run context.
enum class Stream : std::uint64_t {
  ThirdParty = 1,
  Alice = 2,
  Bob = 3,
  Eavesdropper = 4,
  EavesdropperSelection = 5,
  KeyOracle = 6,
  Harness = 7,
};

/// Per-run randomness: one root seed split deterministically per party, so a
/// strategy that draws from its own stream never perturbs anyone else's.
class RunContext {
 public:
  explicit RunContext(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng& stream(Stream s);

  /// A fresh context for a restart or a sub-trial, derived from this seed.
  RunContext derive(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::vector<Rng> streams_;
};

}  // namespace qpc

#endif  // QPC_RNG_HPP
