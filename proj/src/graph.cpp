#include "rnnd/graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <zlib.h>

#include "rnnd/common.hpp"
#include "rnnd/metric.hpp"
#include "rnnd/rng.hpp"

namespace rnnd {

namespace {

constexpr char kMagic[4] = {'R', 'N', 'N', 'D'};
constexpr uint32_t kVersion = 1;

void put_u32_le(std::vector<unsigned char>& out, uint32_t v) {
  out.push_back(uint8_t(v));
  out.push_back(uint8_t(v >> 8));
  out.push_back(uint8_t(v >> 16));
  out.push_back(uint8_t(v >> 24));
}

void put_u64_le(std::vector<unsigned char>& out, uint64_t v) {
  put_u32_le(out, uint32_t(v));
  put_u32_le(out, uint32_t(v >> 32));
}

uint32_t get_u32_le(const unsigned char* p) {
  return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
         uint32_t(p[3]) << 24;
}

uint64_t get_u64_le(const unsigned char* p) {
  return uint64_t(get_u32_le(p)) | uint64_t(get_u32_le(p + 4)) << 32;
}

uint32_t crc_of(const unsigned char* data, size_t size) {
  return uint32_t(crc32(0L, data, uInt(size)));
}

}  // namespace

AdjacencyGraph random_init(const VectorStore& store, uint32_t S,
                           uint64_t seed) {
  const size_t n = store.n;
  if (n < 2) throw ParamError("random_init: need at least 2 vectors");
  if (S < 1 || S > n - 1) throw ParamError("random_init: S out of [1, n-1]");
  AdjacencyGraph g(n);
#pragma omp parallel for schedule(static)
  for (int64_t u = 0; u < int64_t(n); ++u) {
    SplitMix64 rng(mix_seed(seed, uint64_t(u)));
    auto ids = sample_distinct(rng, uint32_t(n), S, uint32_t(u));
    auto& list = g.adj[size_t(u)];
    list.reserve(S);
    for (uint32_t id : ids)
      list.push_back({id, l2_sq(store.row(size_t(u)), store.row(id)), true});
  }
  return g;
}

void select_nearest(const AdjacencyGraph& g, uint32_t u, uint32_t cap,
                    std::vector<NeighborEntry>& out) {
  const auto& list = g.adj[u];
  out.assign(list.begin(), list.end());
  if (cap == 0 || out.size() <= cap) return;
  if (g.has_distances) {
    std::partial_sort(out.begin(), out.begin() + cap, out.end(), nearer);
  }
  out.resize(cap);
}

DegreeStats degree_stats(const AdjacencyGraph& g, uint32_t cap) {
  const size_t n = g.size();
  DegreeStats st;
  std::vector<uint32_t> indeg(n, 0);
  std::vector<uint64_t> outdeg(n, 0);
  std::vector<NeighborEntry> sel;
  for (size_t u = 0; u < n; ++u) {
    select_nearest(g, uint32_t(u), cap, sel);
    outdeg[u] = sel.size();
    st.edges += sel.size();
    for (auto& e : sel) ++indeg[e.id];
  }
  for (size_t u = 0; u < n; ++u) {
    st.max_out = std::max(st.max_out, uint32_t(outdeg[u]));
    st.max_in = std::max(st.max_in, indeg[u]);
  }
  st.out_hist.assign(st.max_out + 1, 0);
  st.in_hist.assign(st.max_in + 1, 0);
  for (size_t u = 0; u < n; ++u) {
    ++st.out_hist[outdeg[u]];
    ++st.in_hist[indeg[u]];
  }
  st.avg_out = n ? double(st.edges) / double(n) : 0.0;
  return st;
}

void save_index(const AdjacencyGraph& g, const std::string& path) {
  const size_t n = g.size();
  const uint64_t m = g.edge_count();
  std::vector<unsigned char> buf;
  buf.reserve(16 + (n + 1) * 8 + m * 4 + 4);
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u32_le(buf, kVersion);
  put_u64_le(buf, uint64_t(n));
  uint64_t off = 0;
  put_u64_le(buf, off);
  for (size_t u = 0; u < n; ++u) {
    off += g.adj[u].size();
    put_u64_le(buf, off);
  }
  for (size_t u = 0; u < n; ++u)
    for (auto& e : g.adj[u]) put_u32_le(buf, e.id);
  put_u32_le(buf, crc_of(buf.data(), buf.size()));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(path + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            std::streamsize(buf.size()));
  out.flush();
  if (!out) throw DataError(path + ": write failed");
}

AdjacencyGraph load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError(path + ": read failed");

  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
    throw DataError(path + ": bad magic");
  if (buf.size() < 16 + 8 + 4) throw DataError(path + ": truncated header");
  uint32_t stored_crc = get_u32_le(buf.data() + buf.size() - 4);
  if (crc_of(buf.data(), buf.size() - 4) != stored_crc)
    throw DataError(path + ": checksum mismatch");
  uint32_t version = get_u32_le(buf.data() + 4);
  if (version != kVersion) throw DataError(path + ": unsupported version");
  uint64_t n = get_u64_le(buf.data() + 8);
  if (n == 0) throw DataError(path + ": empty graph");
  size_t offsets_at = 16;
  if (buf.size() < offsets_at + (n + 1) * 8 + 4)
    throw DataError(path + ": truncated offsets");
  std::vector<uint64_t> offsets(n + 1);
  for (size_t i = 0; i <= n; ++i)
    offsets[i] = get_u64_le(buf.data() + offsets_at + i * 8);
  if (offsets[0] != 0) throw DataError(path + ": bad offsets");
  for (size_t i = 0; i < n; ++i)
    if (offsets[i + 1] < offsets[i]) throw DataError(path + ": bad offsets");
  uint64_t m = offsets[n];
  size_t ids_at = offsets_at + (n + 1) * 8;
  if (buf.size() != ids_at + m * 4 + 4)
    throw DataError(path + ": size does not match offsets");

  AdjacencyGraph g(n);
  g.has_distances = false;
  std::vector<uint32_t> seen_ids;
  for (size_t u = 0; u < n; ++u) {
    auto& list = g.adj[u];
    list.reserve(size_t(offsets[u + 1] - offsets[u]));
    seen_ids.clear();
    for (uint64_t j = offsets[u]; j < offsets[u + 1]; ++j) {
      uint32_t id = get_u32_le(buf.data() + ids_at + j * 4);
      if (id >= n) throw DataError(path + ": id out of range");
      if (id == u) throw DataError(path + ": self-loop");
      seen_ids.push_back(id);
      list.push_back({id, 0.0f, false});
    }
    std::sort(seen_ids.begin(), seen_ids.end());
    if (std::adjacent_find(seen_ids.begin(), seen_ids.end()) != seen_ids.end())
      throw DataError(path + ": duplicate edge");
  }
  return g;
}

void attach_distances(AdjacencyGraph& g, const VectorStore& store,
                      int threads) {
  if (store.n != g.size())
    throw DataError("attach_distances: store size does not match graph");
  const int nt = resolve_threads(threads);
#pragma omp parallel for schedule(dynamic, 256) num_threads(nt)
  for (int64_t u = 0; u < int64_t(g.size()); ++u)
    for (auto& e : g.adj[size_t(u)])
      e.dist = l2_sq(store.row(size_t(u)), store.row(e.id));
  g.has_distances = true;
}

}  // namespace rnnd
