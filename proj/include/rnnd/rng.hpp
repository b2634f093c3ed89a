#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

namespace rnnd {

// SplitMix64 (Steele, Lea, Flood). Chosen over <random> engines because the
// output sequence for a given seed is identical on every platform, which the
// determinism guarantees depend on.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Integer in [0, bound) by 128-bit multiply-shift. Bias is negligible for
  // bound far below 2^64.
  uint64_t bounded(uint64_t bound) {
    return uint64_t((static_cast<__uint128_t>(next()) * bound) >> 64);
  }

  // Float in [0, 1) from the top 24 bits.
  float unit_float() { return float(next() >> 40) * (1.0f / 16777216.0f); }

 private:
  uint64_t state_;
};

// Decorrelated seed for an independent stream, e.g. one generator per vertex.
// Keeps per-vertex randomness independent of how work is scheduled.
inline uint64_t mix_seed(uint64_t seed, uint64_t stream) {
  SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (stream + 1)));
  return g.next();
}

// `count` distinct values from [0, n) \ {exclude} by Floyd's sampling.
// Pass exclude >= n to sample from all of [0, n). Requires count <= domain.
inline std::vector<uint32_t> sample_distinct(SplitMix64& rng, uint32_t n,
                                             uint32_t count,
                                             uint32_t exclude = UINT32_MAX) {
  const uint32_t domain = exclude < n ? n - 1 : n;
  std::vector<uint32_t> out;
  out.reserve(count);
  if (count <= 64) {
    for (uint32_t j = domain - count; j < domain; ++j) {
      uint32_t t = uint32_t(rng.bounded(j + 1));
      bool hit = std::find(out.begin(), out.end(), t) != out.end();
      out.push_back(hit ? j : t);
    }
  } else {
    std::unordered_set<uint32_t> picked;
    picked.reserve(count * 2);
    for (uint32_t j = domain - count; j < domain; ++j) {
      uint32_t t = uint32_t(rng.bounded(j + 1));
      uint32_t v = picked.count(t) ? j : t;
      picked.insert(v);
      out.push_back(v);
    }
  }
  if (exclude < n)
    for (auto& x : out)
      if (x >= exclude) ++x;
  return out;
}

}  // namespace rnnd
