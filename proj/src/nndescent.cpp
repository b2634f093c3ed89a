#include "rnnd/nndescent.hpp"

#include <algorithm>
#include <chrono>

#include "rnnd/metric.hpp"
#include "rnnd/rng.hpp"

namespace rnnd {

NnDescent::NnDescent(const VectorStore& store, const NnDescentParams& p)
    : store_(store), params_(p) {
  if (store.n < 2) throw ParamError("nndescent: need at least 2 vectors");
  if (p.K < 1 || p.K > store.n - 1)
    throw ParamError("nndescent: K out of [1, n-1]");
  if (p.sample < 1) throw ParamError("nndescent: sample must be >= 1");
  if (p.iters < 1) throw ParamError("nndescent: iters must be >= 1");
  pool_cap_ = std::max(p.pool ? p.pool : 2 * p.K, p.K);
  threads_ = resolve_threads(p.threads);
  pools_.resize(store.n);
  locks_ = std::make_unique<std::mutex[]>(store.n);
}

void NnDescent::init() {
  const size_t n = store_.n;
  const uint32_t s = std::min<uint32_t>(params_.sample, uint32_t(n - 1));
#pragma omp parallel for schedule(static) num_threads(threads_)
  for (int64_t u = 0; u < int64_t(n); ++u) {
    SplitMix64 rng(mix_seed(params_.seed, uint64_t(u)));
    auto ids = sample_distinct(rng, uint32_t(n), s, uint32_t(u));
    auto& pool = pools_[size_t(u)];
    pool.reserve(pool_cap_);
    for (uint32_t id : ids)
      pool.push_back({id, l2_sq(store_.row(size_t(u)), store_.row(id)), true});
    std::sort(pool.begin(), pool.end(), nearer);
  }
}

bool NnDescent::insert_candidate(uint32_t vertex, uint32_t id, float dist) {
  std::lock_guard<std::mutex> guard(locks_[vertex]);
  auto& pool = pools_[vertex];
  NeighborEntry cand{id, dist, true};
  if (pool.size() == pool_cap_ && !nearer(cand, pool.back())) return false;
  for (auto& e : pool)
    if (e.id == id) return false;
  auto at = std::upper_bound(pool.begin(), pool.end(), cand, nearer);
  pool.insert(at, cand);
  if (pool.size() > pool_cap_) pool.pop_back();
  return true;
}

uint64_t NnDescent::join_pass() {
  const size_t n = store_.n;
  uint64_t inserted = 0;
#pragma omp parallel num_threads(threads_) reduction(+ : inserted)
  {
    std::vector<uint32_t> fresh, old;
#pragma omp for schedule(dynamic, 64)
    for (int64_t u = 0; u < int64_t(n); ++u) {
      fresh.clear();
      old.clear();
      {
        // snapshot participants; the fresh ones picked here turn old now so
        // no later pass joins the same pair through this vertex again
        std::lock_guard<std::mutex> guard(locks_[size_t(u)]);
        for (auto& e : pools_[size_t(u)]) {
          if (e.fresh && fresh.size() < params_.sample) {
            fresh.push_back(e.id);
            e.fresh = false;
          } else if (!e.fresh) {
            old.push_back(e.id);
          }
        }
      }
      auto join = [&](uint32_t a, uint32_t b) {
        float dist = l2_sq(store_.row(a), store_.row(b));
        if (insert_candidate(a, b, dist)) ++inserted;
        if (insert_candidate(b, a, dist)) ++inserted;
      };
      for (size_t i = 0; i < fresh.size(); ++i)
        for (size_t j = i + 1; j < fresh.size(); ++j) join(fresh[i], fresh[j]);
      for (uint32_t f : fresh)
        for (uint32_t o : old) join(f, o);
    }
  }
  return inserted;
}

AdjacencyGraph NnDescent::finalize() const {
  AdjacencyGraph g(store_.n);
#pragma omp parallel for schedule(static) num_threads(threads_)
  for (int64_t u = 0; u < int64_t(store_.n); ++u) {
    const auto& pool = pools_[size_t(u)];
    size_t take = std::min<size_t>(params_.K, pool.size());
    auto& list = g.adj[size_t(u)];
    list.assign(pool.begin(), pool.begin() + take);
    for (auto& e : list) e.fresh = false;
  }
  return g;
}

AdjacencyGraph build_nndescent(const VectorStore& store,
                               const NnDescentParams& params,
                               BuildStats* stats) {
  const auto t0 = std::chrono::steady_clock::now();
  NnDescent nnd(store, params);
  nnd.init();
  BuildStats local;
  for (uint32_t it = 0; it < params.iters; ++it) {
    nnd.join_pass();
    ++local.update_passes;
  }
  AdjacencyGraph g = nnd.finalize();
  local.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (stats) *stats = local;
  return g;
}

}  // namespace rnnd
