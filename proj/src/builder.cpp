#include "rnnd/builder.hpp"

#include <algorithm>
#include <chrono>

#include "rnnd/metric.hpp"

namespace rnnd {

namespace {

struct PendingEdge {
  uint32_t src;
  uint32_t dst;
  float dist;
};

bool pending_less(const PendingEdge& a, const PendingEdge& b) {
  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
}

bool has_target(const std::vector<NeighborEntry>& list, uint32_t id) {
  for (auto& e : list)
    if (e.id == id) return true;
  return false;
}

std::vector<std::pair<size_t, size_t>> src_ranges(
    const std::vector<PendingEdge>& v) {
  std::vector<std::pair<size_t, size_t>> r;
  size_t i = 0;
  while (i < v.size()) {
    size_t j = i + 1;
    while (j < v.size() && v[j].src == v[i].src) ++j;
    r.emplace_back(i, j);
    i = j;
  }
  return r;
}

// Scan one vertex's sorted candidates. On occlusion reports the redirected
// edge through `redirect` instead of touching other lists, so both the serial
// and the deferred parallel pass share this code.
template <class RedirectFn>
void scan_vertex(std::vector<NeighborEntry>& cand,
                 std::vector<NeighborEntry>& kept, const VectorStore& store,
                 EditCounts& ec, RedirectFn redirect) {
  std::sort(cand.begin(), cand.end(), nearer);
  kept.clear();
  for (auto& v : cand) {
    bool keep = true;
    for (auto& w : kept) {
      if (!v.fresh && !w.fresh) {
        ++ec.flag_skips;
        continue;
      }
      ++ec.pair_checks;
      float dvw = l2_sq(store.row(v.id), store.row(w.id));
      if (v.dist >= dvw) {
        keep = false;
        ++ec.removed;
        redirect(w.id, v.id, dvw);
        break;
      }
    }
    if (keep) kept.push_back(v);
  }
  for (auto& e : kept) e.fresh = false;
}

EditCounts update_serial(AdjacencyGraph& g, const VectorStore& store) {
  EditCounts ec;
  std::vector<NeighborEntry> cand, kept;
  for (size_t u = 0; u < g.size(); ++u) {
    cand.assign(g.adj[u].begin(), g.adj[u].end());
    scan_vertex(cand, kept, store, ec, [&](uint32_t w, uint32_t v, float dvw) {
      auto& wl = g.adj[w];
      if (!has_target(wl, v)) {
        wl.push_back({v, dvw, true});
        ++ec.inserted;
      }
    });
    g.adj[u].assign(kept.begin(), kept.end());
  }
  return ec;
}

EditCounts update_parallel(AdjacencyGraph& g, const VectorStore& store,
                           int threads) {
  const size_t n = g.size();
  std::vector<EditCounts> tl_counts(static_cast<size_t>(threads));
  std::vector<std::vector<PendingEdge>> tl_pending(
      static_cast<size_t>(threads));
#pragma omp parallel num_threads(threads)
  {
    auto& ec = tl_counts[size_t(omp_get_thread_num())];
    auto& pend = tl_pending[size_t(omp_get_thread_num())];
    std::vector<NeighborEntry> cand, kept;
#pragma omp for schedule(dynamic, 64)
    for (int64_t u = 0; u < int64_t(n); ++u) {
      cand.assign(g.adj[size_t(u)].begin(), g.adj[size_t(u)].end());
      scan_vertex(cand, kept, store, ec,
                  [&](uint32_t w, uint32_t v, float dvw) {
                    pend.push_back({w, v, dvw});
                  });
      g.adj[size_t(u)].assign(kept.begin(), kept.end());
    }
  }
  EditCounts total;
  size_t m = 0;
  for (auto& p : tl_pending) m += p.size();
  std::vector<PendingEdge> pending;
  pending.reserve(m);
  for (auto& p : tl_pending) pending.insert(pending.end(), p.begin(), p.end());
  for (auto& c : tl_counts) total += c;
  // canonical apply order; duplicate proposals collapse to one
  std::sort(pending.begin(), pending.end(), pending_less);
  pending.erase(std::unique(pending.begin(), pending.end(),
                            [](const PendingEdge& a, const PendingEdge& b) {
                              return a.src == b.src && a.dst == b.dst;
                            }),
                pending.end());
  auto ranges = src_ranges(pending);
  uint64_t inserted = 0;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads) \
    reduction(+ : inserted)
  for (int64_t ri = 0; ri < int64_t(ranges.size()); ++ri) {
    auto [lo, hi] = ranges[size_t(ri)];
    auto& list = g.adj[pending[lo].src];
    for (size_t i = lo; i < hi; ++i) {
      if (!has_target(list, pending[i].dst)) {
        list.push_back({pending[i].dst, pending[i].dist, true});
        ++inserted;
      }
    }
  }
  total.inserted += inserted;
  return total;
}

void out_prune(AdjacencyGraph& g, uint32_t R, int threads) {
#pragma omp parallel for schedule(dynamic, 256) num_threads(threads)
  for (int64_t u = 0; u < int64_t(g.size()); ++u) {
    auto& list = g.adj[size_t(u)];
    if (list.size() > R) {
      std::sort(list.begin(), list.end(), nearer);
      list.resize(R);
    }
  }
}

void in_prune(AdjacencyGraph& g, uint32_t R, int threads) {
  struct InEdge {
    uint32_t target;
    uint32_t source;
    float dist;
  };
  std::vector<InEdge> ins;
  ins.reserve(g.edge_count());
  for (size_t u = 0; u < g.size(); ++u)
    for (auto& e : g.adj[u]) ins.push_back({e.id, uint32_t(u), e.dist});
  std::sort(ins.begin(), ins.end(), [](const InEdge& a, const InEdge& b) {
    if (a.target != b.target) return a.target < b.target;
    if (a.dist != b.dist) return a.dist < b.dist;
    return a.source < b.source;
  });
  // everything past each target's R nearest in-edges gets deleted
  std::vector<PendingEdge> deletions;
  size_t i = 0;
  while (i < ins.size()) {
    size_t j = i + 1;
    while (j < ins.size() && ins[j].target == ins[i].target) ++j;
    for (size_t p = i + R; p < j; ++p)
      deletions.push_back({ins[p].source, ins[p].target, 0.0f});
    i = j;
  }
  if (deletions.empty()) return;
  std::sort(deletions.begin(), deletions.end(), pending_less);
  auto ranges = src_ranges(deletions);
  std::vector<uint32_t> targets;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads) \
    firstprivate(targets)
  for (int64_t ri = 0; ri < int64_t(ranges.size()); ++ri) {
    auto [lo, hi] = ranges[size_t(ri)];
    targets.clear();
    for (size_t p = lo; p < hi; ++p) targets.push_back(deletions[p].dst);
    auto& list = g.adj[deletions[lo].src];
    std::erase_if(list, [&](const NeighborEntry& e) {
      return std::binary_search(targets.begin(), targets.end(), e.id);
    });
  }
}

}  // namespace

std::vector<NeighborEntry> rng_strategy(const VectorStore& store, uint32_t u,
                                        std::vector<NeighborEntry> candidates) {
  std::sort(candidates.begin(), candidates.end(), nearer);
  std::vector<NeighborEntry> kept;
  for (auto& v : candidates) {
    if (v.id == u) throw ParamError("rng_strategy: candidate equals u");
    bool keep = true;
    for (auto& w : kept) {
      if (v.dist >= l2_sq(store.row(v.id), store.row(w.id))) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(v);
  }
  return kept;
}

EditCounts update_neighbors(AdjacencyGraph& g, const VectorStore& store,
                            int threads) {
  if (!g.has_distances)
    throw ParamError("update_neighbors: graph has no distances");
  const int nt = resolve_threads(threads);
  return nt == 1 ? update_serial(g, store) : update_parallel(g, store, nt);
}

void add_reverse_edges(AdjacencyGraph& g, uint32_t R, int threads,
                       PruneOrder order) {
  if (R < 1) throw ParamError("add_reverse_edges: R must be >= 1");
  if (!g.has_distances)
    throw ParamError("add_reverse_edges: graph has no distances");
  const int nt = resolve_threads(threads);
  // snapshot the reversals of the current edge set, then apply in canonical
  // (source, target) order so every thread count gives the same lists
  std::vector<PendingEdge> props;
  props.reserve(g.edge_count());
  for (size_t u = 0; u < g.size(); ++u)
    for (auto& e : g.adj[u]) props.push_back({e.id, uint32_t(u), e.dist});
  std::sort(props.begin(), props.end(), pending_less);
  auto ranges = src_ranges(props);
#pragma omp parallel for schedule(dynamic, 16) num_threads(nt)
  for (int64_t ri = 0; ri < int64_t(ranges.size()); ++ri) {
    auto [lo, hi] = ranges[size_t(ri)];
    auto& list = g.adj[props[lo].src];
    for (size_t i = lo; i < hi; ++i)
      if (!has_target(list, props[i].dst))
        list.push_back({props[i].dst, props[i].dist, true});
  }
  if (order == PruneOrder::kOutThenIn) {
    out_prune(g, R, nt);
    in_prune(g, R, nt);
  } else {
    in_prune(g, R, nt);
    out_prune(g, R, nt);
  }
}

AdjacencyGraph build(const VectorStore& store, const BuildParams& p,
                     BuildStats* stats, const BuildProgressFn& progress) {
  if (store.n < 2) throw ParamError("build: need at least 2 vectors");
  if (p.S < 1 || p.S > store.n - 1) throw ParamError("build: S out of [1, n-1]");
  if (p.R < 1) throw ParamError("build: R must be >= 1");
  if (p.T1 < 1 || p.T2 < 1) throw ParamError("build: T1 and T2 must be >= 1");
  const int nt = resolve_threads(p.threads);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };
  AdjacencyGraph g = random_init(store, p.S, p.seed);
  BuildStats local;
  for (uint32_t t1 = 1; t1 <= p.T1; ++t1) {
    EditCounts outer;
    for (uint32_t t2 = 0; t2 < p.T2; ++t2) {
      outer += update_neighbors(g, store, nt);
      ++local.update_passes;
    }
    if (t1 != p.T1) {
      add_reverse_edges(g, p.R, nt, p.prune_order);
      ++local.reverse_phases;
    }
    local.edits += outer;
    if (progress) progress(t1, p.T1, outer, elapsed());
  }
  // normalize lists nearest-first: a no-op for selection results, but it pins
  // serialized byte order and lets a distance-free prefix cap select the same
  // edges as the distance-aware cap
#pragma omp parallel for schedule(dynamic, 256) num_threads(nt)
  for (int64_t u = 0; u < int64_t(g.size()); ++u)
    std::sort(g.adj[size_t(u)].begin(), g.adj[size_t(u)].end(), nearer);
  local.seconds = elapsed();
  if (stats) *stats = local;
  return g;
}

}  // namespace rnnd
