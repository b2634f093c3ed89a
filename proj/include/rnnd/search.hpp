#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rnnd/common.hpp"
#include "rnnd/graph.hpp"
#include "rnnd/vector_store.hpp"

namespace rnnd {

enum class EntryMode { kRandomSample, kFixedVertex };

struct SearchParams {
  uint32_t L = 64;        // candidate pool size
  uint32_t K = 0;         // out-degree cap during expansion, 0 = unlimited
  uint32_t k = 1;         // results returned, k <= L
  EntryMode entry = EntryMode::kRandomSample;
  uint32_t entry_vertex = 0;   // kFixedVertex only
  uint32_t entry_count = 0;    // kRandomSample only, 0 selects min(L, n)
  uint64_t seed = kDefaultSeed;
};

struct SearchResult {
  std::vector<uint32_t> ids;   // ascending (dist, id)
  std::vector<float> dists;
  uint64_t visited = 0;        // vertices expanded
  uint64_t dist_comps = 0;     // query-vector distance evaluations
};

// Beam search over the graph: a pool of the L nearest candidates seen so far
// (ties by id); repeatedly expand the nearest unexpanded candidate through up
// to K nearest out-edges, stopping when the pool holds no unexpanded entry.
// Pure function of (graph, store, query, params): identical results for any
// thread count.
SearchResult search(const AdjacencyGraph& g, const VectorStore& store,
                    std::span<const float> query, const SearchParams& params);

struct BatchTiming {
  double wall_seconds = 0.0;
  double qps = 0.0;
};

std::vector<SearchResult> batch_search(const AdjacencyGraph& g,
                                       const VectorStore& store,
                                       const VectorStore& queries,
                                       const SearchParams& params,
                                       int threads = 0,
                                       BatchTiming* timing = nullptr);

}  // namespace rnnd
