#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rnnd {

// Row-major store of n d-dimensional float32 vectors. Loaders and the
// synthesizer guarantee every value is finite.
struct VectorStore {
  size_t n = 0;
  size_t d = 0;
  std::vector<float> data;  // n * d

  std::span<const float> row(size_t i) const {
    return {data.data() + i * d, d};
  }
};

// k nearest base ids per query row, ascending distance, ties by lower id.
struct GroundTruth {
  size_t k = 0;
  std::vector<uint32_t> ids;  // rows() * k

  size_t rows() const { return k ? ids.size() / k : 0; }
  std::span<const uint32_t> row(size_t q) const {
    return {ids.data() + q * k, k};
  }
};

// fvecs / ivecs: a sequence of records, each a little-endian int32 dimension
// followed by that many 4-byte little-endian payloads (float32 / int32).
VectorStore load_fvecs(const std::string& path);
void write_fvecs(const VectorStore& store, const std::string& path);
GroundTruth load_ivecs(const std::string& path);
void write_ivecs(const GroundTruth& gt, const std::string& path);

// Deterministic synthetic data, i.i.d. uniform [0, 1), filled row-major from
// a single SplitMix64 stream seeded with `seed`.
VectorStore synth_uniform(size_t n, size_t d, uint64_t seed);

// Uniform latent points pushed through a fixed random linear map into d
// dimensions: ambient dimension d, intrinsic dimension `latent`. Stands in
// for descriptor-style data (SIFT and friends) whose intrinsic dimension
// sits far below the ambient one. Deterministic in (n, d, latent, seed) for
// any thread count.
VectorStore synth_lowdim(size_t n, size_t d, size_t latent, uint64_t seed);

// Exact k nearest neighbors of every query by exhaustive scan.
GroundTruth brute_force_gt(const VectorStore& base, const VectorStore& queries,
                           size_t k, int threads = 0);

// All ids fall in [0, n); throws DataError otherwise.
void validate_ids(const GroundTruth& gt, size_t n);

}  // namespace rnnd
