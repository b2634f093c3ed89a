#pragma once

#include <memory>
#include <mutex>

#include "rnnd/builder.hpp"
#include "rnnd/graph.hpp"

namespace rnnd {

struct NnDescentParams {
  uint32_t K = 64;      // final out-degree
  uint32_t sample = 10; // per-pass cap on fresh entries joining at a vertex
  uint32_t iters = 10;
  uint32_t pool = 0;    // candidate pool capacity, 0 selects 2 * K
  uint64_t seed = kDefaultSeed;
  int threads = 0;
};

// Classic NN-Descent, kept as the baseline the RNN builder is compared
// against. Per-vertex candidate pools ordered ascending (dist, id); each pass
// runs a local join at every vertex: the pool's nearest `sample` fresh
// entries (marked old on selection) are paired with each other and with all
// old entries, and each pair inserts the other endpoint into both pools.
// Pool insertion is capped, deduplicated and guarded by per-vertex mutexes,
// so results are deterministic only for threads == 1.
class NnDescent {
 public:
  NnDescent(const VectorStore& store, const NnDescentParams& params);

  void init();          // pools start with `sample` random fresh entries
  uint64_t join_pass(); // returns the number of pool insertions
  AdjacencyGraph finalize() const;  // K nearest pool entries per vertex

  std::vector<std::vector<NeighborEntry>>& pools() { return pools_; }

 private:
  bool insert_candidate(uint32_t vertex, uint32_t id, float dist);

  const VectorStore& store_;
  NnDescentParams params_;
  uint32_t pool_cap_;
  int threads_;
  std::vector<std::vector<NeighborEntry>> pools_;
  std::unique_ptr<std::mutex[]> locks_;
};

AdjacencyGraph build_nndescent(const VectorStore& store,
                               const NnDescentParams& params,
                               BuildStats* stats = nullptr);

}  // namespace rnnd
