#include "qpc/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qpc {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Rejection sampling on the top of the range keeps the result unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % bound;
}

std::vector<std::size_t> Rng::choose(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("Rng::choose: k exceeds n");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates: the first k entries end up a uniform k-subset.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RunContext::RunContext(std::uint64_t seed) : seed_(seed) {
  for (std::uint64_t s = 1; s <= static_cast<std::uint64_t>(Stream::Harness); ++s) {
    streams_.emplace_back(mix_seed(seed, s));
  }
}

Rng& RunContext::stream(Stream s) {
  return streams_.at(static_cast<std::size_t>(s) - 1);
}

RunContext RunContext::derive(std::uint64_t index) const {
  return RunContext(mix_seed(seed_ ^ 0xD1B54A32D192ED03ULL, index));
}

}  // namespace qpc
