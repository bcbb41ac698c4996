#pragma once

// Counter-based random streams: stream k of seed s is a pure function of
// (s, k), so parallel loops over k give identical results for any thread
// count or schedule.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace affdim {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t index)
      : key_(mix64(seed ^ mix64(index ^ 0x6a09e667f3bcc909ULL))) {}

  std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Inverse-CDF sampler over {0, ..., N-1}.
class SymbolSampler {
 public:
  explicit SymbolSampler(std::span<const double> probabilities) {
    cdf_.reserve(probabilities.size());
    double acc = 0.0;
    for (double p : probabilities) cdf_.push_back(acc += p);
    cdf_.back() = 1.0;
  }

  std::size_t draw(CounterStream& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace affdim
