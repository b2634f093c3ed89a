#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnnd/vector_store.hpp"

namespace rnnd {

// One directed out-edge. `fresh` marks entries added since the owning
// vertex's last selection pass ("new" in the usual NN-Descent terminology;
// renamed because new is a keyword).
struct NeighborEntry {
  uint32_t id;
  float dist;
  bool fresh;
};

// Ascending (dist, id); every ordering decision in the library uses this.
inline bool nearer(const NeighborEntry& a, const NeighborEntry& b) {
  return a.dist != b.dist ? a.dist < b.dist : a.id < b.id;
}

struct AdjacencyGraph {
  // adj[u] holds u's out-edges. No duplicate targets, no self-loops.
  std::vector<std::vector<NeighborEntry>> adj;
  // Deserialized graphs carry no cached distances until attach_distances().
  bool has_distances = true;

  AdjacencyGraph() = default;
  explicit AdjacencyGraph(size_t n) : adj(n) {}

  size_t size() const { return adj.size(); }
  uint64_t edge_count() const {
    uint64_t m = 0;
    for (auto& l : adj) m += l.size();
    return m;
  }
};

// Start graph: S distinct non-self out-neighbors per vertex, all fresh, with
// cached distances. Per-vertex generator streams, so the result depends only
// on (n, S, seed), never on scheduling.
AdjacencyGraph random_init(const VectorStore& store, uint32_t S, uint64_t seed);

struct DegreeStats {
  std::vector<uint64_t> out_hist;  // index = degree
  std::vector<uint64_t> in_hist;
  uint64_t edges = 0;
  double avg_out = 0.0;  // average out-degree == edges / n
  uint32_t max_out = 0;
  uint32_t max_in = 0;
};

// cap == 0 means uncapped. A capped report counts only each vertex's `cap`
// nearest out-edges, mirroring the search-time degree limit.
DegreeStats degree_stats(const AdjacencyGraph& g, uint32_t cap = 0);

// The `cap` nearest out-neighbors of u into `out` (the whole list if cap == 0
// or the degree is within cap). Falls back to stored order when the graph has
// no distances; index files store each list nearest-first, so the fallback
// selects the same edges.
void select_nearest(const AdjacencyGraph& g, uint32_t u, uint32_t cap,
                    std::vector<NeighborEntry>& out);

// Index file: "RNND" magic, u32 version, u64 n, u64 offsets[n+1], u32 ids,
// u32 CRC-32 over all preceding bytes. Little-endian throughout. Flags and
// distances are not persisted.
void save_index(const AdjacencyGraph& g, const std::string& path);
AdjacencyGraph load_index(const std::string& path);

// Recompute cached distances for a deserialized graph.
void attach_distances(AdjacencyGraph& g, const VectorStore& store,
                      int threads = 0);

}  // namespace rnnd
