#include "rnnd/vector_store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <utility>

#include "rnnd/common.hpp"
#include "rnnd/metric.hpp"
#include "rnnd/rng.hpp"

namespace rnnd {

namespace {

uint32_t get_u32_le(const unsigned char* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}

void put_u32_le(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back(uint8_t(v));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 24));
}

std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open");
  in.seekg(0, std::ios::end);
  auto size = in.tellg();
  if (size < 0) throw DataError(path + ": cannot read");
  in.seekg(0);
  std::vector<unsigned char> buf(static_cast<size_t>(size), 0);
  if (size > 0) in.read(reinterpret_cast<char*>(buf.data()), size);
  if (!in) throw DataError(path + ": read failed");
  return buf;
}

void write_file(const std::string& path, const std::vector<unsigned char>& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(path + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size()));
  out.flush();
  if (!out) throw DataError(path + ": write failed");
}

// Shared record walk for both formats: calls on_value(record, index, raw u32)
// for every payload word, enforcing a consistent positive dimension.
template <class Fn>
size_t parse_vecs(const std::string& path, const std::vector<unsigned char>& buf,
                  size_t& dim_out, Fn on_value) {
  size_t pos = 0, records = 0, dim = 0;
  while (pos < buf.size()) {
    if (buf.size() - pos < 4) throw DataError(path + ": truncated record header");
    int32_t rd = int32_t(get_u32_le(buf.data() + pos));
    pos += 4;
    if (rd <= 0) throw DataError(path + ": non-positive record dimension");
    size_t urd = size_t(rd);
    if (records == 0) {
      dim = urd;
    } else if (urd != dim) {
      throw DataError(path + ": record dimension mismatch");
    }
    if (buf.size() - pos < 4 * urd)
      throw DataError(path + ": truncated record payload");
    for (size_t i = 0; i < urd; ++i, pos += 4)
      on_value(records, i, get_u32_le(buf.data() + pos));
    ++records;
  }
  if (records == 0) throw DataError(path + ": empty file");
  dim_out = dim;
  return records;
}

}  // namespace

VectorStore load_fvecs(const std::string& path) {
  auto buf = read_file(path);
  VectorStore store;
  std::vector<float>& data = store.data;
  size_t dim = 0;
  size_t records = parse_vecs(path, buf, dim, [&](size_t, size_t, uint32_t w) {
    float v = std::bit_cast<float>(w);
    if (!std::isfinite(v)) throw DataError(path + ": non-finite value");
    data.push_back(v);
  });
  store.n = records;
  store.d = dim;
  return store;
}

void write_fvecs(const VectorStore& store, const std::string& path) {
  if (store.n == 0 || store.d == 0)
    throw ParamError("write_fvecs: empty store");
  std::vector<unsigned char> buf;
  buf.reserve(store.n * (4 + 4 * store.d));
  for (size_t i = 0; i < store.n; ++i) {
    put_u32_le(buf, uint32_t(store.d));
    for (float v : store.row(i)) put_u32_le(buf, std::bit_cast<uint32_t>(v));
  }
  write_file(path, buf);
}

GroundTruth load_ivecs(const std::string& path) {
  auto buf = read_file(path);
  GroundTruth gt;
  size_t dim = 0;
  parse_vecs(path, buf, dim, [&](size_t, size_t, uint32_t w) {
    if (int32_t(w) < 0) throw DataError(path + ": negative id");
    gt.ids.push_back(w);
  });
  gt.k = dim;
  return gt;
}

void write_ivecs(const GroundTruth& gt, const std::string& path) {
  if (gt.k == 0 || gt.rows() == 0) throw ParamError("write_ivecs: empty table");
  if (gt.ids.size() != gt.rows() * gt.k)
    throw ParamError("write_ivecs: ragged table");
  std::vector<unsigned char> buf;
  buf.reserve(gt.rows() * (4 + 4 * gt.k));
  for (size_t q = 0; q < gt.rows(); ++q) {
    put_u32_le(buf, uint32_t(gt.k));
    for (uint32_t id : gt.row(q)) put_u32_le(buf, id);
  }
  write_file(path, buf);
}

VectorStore synth_uniform(size_t n, size_t d, uint64_t seed) {
  if (n == 0 || d == 0) throw ParamError("synth_uniform: n and d must be >= 1");
  VectorStore store;
  store.n = n;
  store.d = d;
  store.data.resize(n * d);
  SplitMix64 rng(seed);
  for (auto& v : store.data) v = rng.unit_float();
  return store;
}

VectorStore synth_lowdim(size_t n, size_t d, size_t latent, uint64_t seed) {
  if (n == 0 || d == 0) throw ParamError("synth_lowdim: n and d must be >= 1");
  if (latent < 1 || latent > d)
    throw ParamError("synth_lowdim: latent must be in [1, d]");
  std::vector<float> map(d * latent);
  SplitMix64 mrng(mix_seed(seed, 0));
  const float scale = 1.0f / std::sqrt(float(latent));
  for (auto& a : map) a = (mrng.unit_float() * 2.0f - 1.0f) * scale;
  std::vector<float> z(n * latent);
  SplitMix64 zrng(mix_seed(seed, 1));
  for (auto& v : z) v = zrng.unit_float();

  VectorStore store;
  store.n = n;
  store.d = d;
  store.data.resize(n * d);
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < int64_t(n); ++i) {
    const float* zi = z.data() + size_t(i) * latent;
    float* out = store.data.data() + size_t(i) * d;
    for (size_t j = 0; j < d; ++j) {
      float acc = 0.0f;
      const float* row = map.data() + j * latent;
      for (size_t c = 0; c < latent; ++c) acc += row[c] * zi[c];
      out[j] = acc;
    }
  }
  return store;
}

GroundTruth brute_force_gt(const VectorStore& base, const VectorStore& queries,
                           size_t k, int threads) {
  if (base.d != queries.d) throw DataError("brute_force_gt: dimension mismatch");
  if (k < 1 || k > base.n) throw ParamError("brute_force_gt: k out of range");
  GroundTruth gt;
  gt.k = k;
  gt.ids.resize(queries.n * k);
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 8) num_threads(nt)
  for (int64_t q = 0; q < int64_t(queries.n); ++q) {
    const float* qv = queries.data.data() + size_t(q) * queries.d;
    // max-heap on (dist, id): the top is the worst of the best k
    std::vector<std::pair<float, uint32_t>> heap;
    heap.reserve(k);
    for (size_t i = 0; i < base.n; ++i) {
      float dist = l2_sq(qv, base.data.data() + i * base.d, base.d);
      std::pair<float, uint32_t> cand{dist, uint32_t(i)};
      if (heap.size() < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end());
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    std::sort_heap(heap.begin(), heap.end());
    for (size_t j = 0; j < k; ++j) gt.ids[size_t(q) * k + j] = heap[j].second;
  }
  return gt;
}

void validate_ids(const GroundTruth& gt, size_t n) {
  for (uint32_t id : gt.ids)
    if (id >= n) throw DataError("ground truth id out of range");
}

}  // namespace rnnd
