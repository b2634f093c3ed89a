#pragma once

#include <functional>

#include "rnnd/common.hpp"
#include "rnnd/graph.hpp"

namespace rnnd {

// Which degree cap runs first when reverse edges are pruned. Out-then-in is
// the default; after either order both caps hold, since neither prune can
// grow a degree the other already limited.
enum class PruneOrder { kOutThenIn, kInThenOut };

struct BuildParams {
  uint32_t S = 20;  // start degree
  uint32_t R = 96;  // degree cap during reverse-edge phases
  uint32_t T1 = 4;  // outer iterations
  uint32_t T2 = 15; // update passes per outer iteration
  uint64_t seed = kDefaultSeed;
  int threads = 0;  // 0 = hardware default; 1 = strict sequential reference
  PruneOrder prune_order = PruneOrder::kOutThenIn;
};

struct EditCounts {
  uint64_t removed = 0;     // edges dropped by the selection scan
  uint64_t inserted = 0;    // redirected edges actually added
  uint64_t flag_skips = 0;  // old/old pairs accepted without a distance
  uint64_t pair_checks = 0; // candidate-pair distances computed

  EditCounts& operator+=(const EditCounts& o) {
    removed += o.removed;
    inserted += o.inserted;
    flag_skips += o.flag_skips;
    pair_checks += o.pair_checks;
    return *this;
  }
};

struct BuildStats {
  double seconds = 0.0;
  uint32_t update_passes = 0;
  uint32_t reverse_phases = 0;
  EditCounts edits;
};

// Called after each outer iteration; for CLI progress lines.
using BuildProgressFn = std::function<void(
    uint32_t t1, uint32_t T1, const EditCounts& outer, double elapsed_s)>;

// Occlusion filter on a candidate list for vertex u. Candidates carry
// distances to u; they are scanned ascending (dist, id) and v survives iff it
// is strictly closer to u than to every already-kept w. Returns the kept list
// in ascending (dist, id) order.
std::vector<NeighborEntry> rng_strategy(const VectorStore& store, uint32_t u,
                                        std::vector<NeighborEntry> candidates);

// One selection pass over all vertices. Each vertex scans its out-list
// ascending; a candidate v occluded by a kept w loses the edge u->v, and the
// edge w->v (distance between w and v, flagged fresh) is inserted unless it
// already exists. A pair is accepted without a distance computation when both
// flags are old. Survivors are flagged old afterwards.
//
// threads == 1 runs the literal sequential algorithm, where redirected edges
// land mid-pass and later vertices see them. threads > 1 runs the parallel
// variant: scans touch only their own vertex's list and redirected edges are
// applied after the scans in canonical (target, id) order, so the result is
// identical for every thread count > 1.
EditCounts update_neighbors(AdjacencyGraph& g, const VectorStore& store,
                            int threads = 1);

// Add the reverse of every current edge (fresh, distance copied), then cap
// degrees at R: each vertex keeps its R nearest out-edges, then each vertex
// keeps its R nearest in-edges (ties by lower neighbor id; order per
// PruneOrder). Afterwards max in-degree <= R and max out-degree <= R.
// Deterministic for every thread count.
void add_reverse_edges(AdjacencyGraph& g, uint32_t R, int threads = 1,
                       PruneOrder order = PruneOrder::kOutThenIn);

// Full RNN-Descent construction: random start graph, T1 rounds of T2
// selection passes, reverse-edge enrichment between rounds (not after the
// last). Final lists are sorted ascending (dist, id); the final out-degree is
// not capped.
AdjacencyGraph build(const VectorStore& store, const BuildParams& params,
                     BuildStats* stats = nullptr,
                     const BuildProgressFn& progress = {});

}  // namespace rnnd
