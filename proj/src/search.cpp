#include "rnnd/search.hpp"

#include <algorithm>
#include <chrono>

#include "rnnd/metric.hpp"
#include "rnnd/rng.hpp"

namespace rnnd {

namespace {

struct PoolEntry {
  float dist;
  uint32_t id;
  bool expanded;
};

bool pool_less(const PoolEntry& a, const PoolEntry& b) {
  return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
}

struct Scratch {
  std::vector<uint8_t> seen;
  std::vector<PoolEntry> pool;
  std::vector<NeighborEntry> nbrs;
};

void validate(const AdjacencyGraph& g, const VectorStore& store,
              std::span<const float> query, const SearchParams& p) {
  if (g.size() == 0) throw ParamError("search: empty graph");
  if (g.size() != store.n) throw ParamError("search: store size mismatch");
  if (query.size() != store.d) throw ParamError("search: dimension mismatch");
  if (p.L < 1) throw ParamError("search: L must be >= 1");
  if (p.k < 1 || p.k > p.L) throw ParamError("search: k out of [1, L]");
  if (p.entry == EntryMode::kFixedVertex && p.entry_vertex >= g.size())
    throw ParamError("search: entry vertex out of range");
}

SearchResult search_impl(const AdjacencyGraph& g, const VectorStore& store,
                         std::span<const float> query, const SearchParams& p,
                         Scratch& s) {
  const size_t n = g.size();
  const float* q = query.data();
  SearchResult res;

  s.seen.assign(n, 0);
  s.pool.clear();
  auto consider = [&](uint32_t id) {
    if (s.seen[id]) return;
    s.seen[id] = 1;
    float dist = l2_sq(q, store.data.data() + size_t(id) * store.d, store.d);
    ++res.dist_comps;
    PoolEntry cand{dist, id, false};
    if (s.pool.size() == p.L && !pool_less(cand, s.pool.back())) return;
    auto at = std::upper_bound(s.pool.begin(), s.pool.end(), cand, pool_less);
    s.pool.insert(at, cand);
    if (s.pool.size() > p.L) s.pool.pop_back();
  };

  if (p.entry == EntryMode::kFixedVertex) {
    consider(p.entry_vertex);
  } else {
    uint32_t count = p.entry_count ? uint32_t(std::min<uint64_t>(p.entry_count, n))
                                   : uint32_t(std::min<uint64_t>(p.L, n));
    SplitMix64 rng(p.seed);
    for (uint32_t id : sample_distinct(rng, uint32_t(n), count))
      consider(id);
  }

  for (;;) {
    size_t at = s.pool.size();
    for (size_t i = 0; i < s.pool.size(); ++i) {
      if (!s.pool[i].expanded) {
        at = i;
        break;
      }
    }
    if (at == s.pool.size()) break;
    s.pool[at].expanded = true;
    ++res.visited;
    select_nearest(g, s.pool[at].id, p.K, s.nbrs);
    for (auto& nb : s.nbrs) consider(nb.id);
  }

  size_t take = std::min<size_t>(p.k, s.pool.size());
  res.ids.resize(take);
  res.dists.resize(take);
  for (size_t i = 0; i < take; ++i) {
    res.ids[i] = s.pool[i].id;
    res.dists[i] = s.pool[i].dist;
  }
  return res;
}

}  // namespace

SearchResult search(const AdjacencyGraph& g, const VectorStore& store,
                    std::span<const float> query, const SearchParams& params) {
  validate(g, store, query, params);
  Scratch s;
  return search_impl(g, store, query, params, s);
}

std::vector<SearchResult> batch_search(const AdjacencyGraph& g,
                                       const VectorStore& store,
                                       const VectorStore& queries,
                                       const SearchParams& params,
                                       int threads, BatchTiming* timing) {
  if (queries.n == 0) throw ParamError("batch_search: no queries");
  if (queries.d != store.d) throw ParamError("batch_search: dimension mismatch");
  validate(g, store, queries.row(0), params);
  const int nt = resolve_threads(threads);
  std::vector<SearchResult> results(queries.n);
  const auto t0 = std::chrono::steady_clock::now();
#pragma omp parallel num_threads(nt)
  {
    Scratch s;
#pragma omp for schedule(dynamic, 16)
    for (int64_t q = 0; q < int64_t(queries.n); ++q)
      results[size_t(q)] = search_impl(g, store, queries.row(size_t(q)),
                                       params, s);
  }
  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (timing) {
    timing->wall_seconds = wall;
    timing->qps = wall > 0 ? double(queries.n) / wall : 0.0;
  }
  return results;
}

}  // namespace rnnd
