#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "rnnd/builder.hpp"
#include "rnnd/metric.hpp"
#include "rnnd/search.hpp"

using namespace rnnd;

namespace {

VectorStore line_store(const std::vector<float>& xs) {
  VectorStore s;
  s.n = xs.size();
  s.d = 1;
  s.data = xs;
  return s;
}

NeighborEntry edge(const VectorStore& s, uint32_t from, uint32_t to) {
  return {to, l2_sq(s.row(from), s.row(to)), false};
}

}  // namespace

TEST_CASE("pool covering the whole dataset returns exact answers") {
  // with L = n every vertex enters the initial pool, so the result matches
  // brute force regardless of the graph's shape
  auto store = synth_uniform(120, 5, 3);
  AdjacencyGraph g(120);  // even an edgeless graph
  auto queries = synth_uniform(25, 5, 4);
  auto gt = brute_force_gt(store, queries, 3, 1);
  SearchParams p;
  p.L = 120;
  p.k = 3;
  for (size_t q = 0; q < queries.n; ++q) {
    auto res = search(g, store, queries.row(q), p);
    REQUIRE(res.ids.size() == 3);
    for (size_t j = 0; j < 3; ++j) CHECK(res.ids[j] == gt.row(q)[j]);
  }
}

TEST_CASE("search hand case") {
  VectorStore store;
  store.n = 3;
  store.d = 2;
  store.data = {0, 0, 1, 0, 5, 5};
  AdjacencyGraph g(3);
  g.adj[0] = {edge(store, 0, 1)};
  g.adj[1] = {edge(store, 1, 0), edge(store, 1, 2)};
  g.adj[2] = {edge(store, 2, 1)};
  std::vector<float> q = {0.9f, 0.0f};
  SearchParams p;
  p.L = 3;
  p.k = 1;
  auto res = search(g, store, q, p);
  REQUIRE(res.ids.size() == 1);
  CHECK(res.ids[0] == 1);
  CHECK(res.dists[0] == l2_sq(std::span<const float>(q), store.row(1)));
  CHECK(res.visited <= 3);
  CHECK(res.dist_comps <= 3);
}

TEST_CASE("expansion honors the degree cap") {
  // hub 0 with spokes 1..5 sorted by distance; K=2 must expand only the two
  // nearest spokes, so the farther ones are never seen
  auto store = line_store({0.0f, 1.0f, 2.0f, 3.0f, 4.0f, 5.0f});
  AdjacencyGraph g(6);
  for (uint32_t i = 1; i <= 5; ++i) g.adj[0].push_back(edge(store, 0, i));
  SearchParams p;
  p.L = 6;
  p.k = 6;
  p.K = 2;
  p.entry = EntryMode::kFixedVertex;
  p.entry_vertex = 0;
  std::vector<float> q = {0.0f};
  auto res = search(g, store, q, p);
  REQUIRE(res.ids.size() == 3);  // hub and two nearest spokes only
  CHECK(res.ids[0] == 0);
  CHECK(res.ids[1] == 1);
  CHECK(res.ids[2] == 2);
  CHECK(res.visited == 3);
  CHECK(res.dist_comps == 3);

  p.K = 0;  // uncapped reaches everything
  res = search(g, store, q, p);
  CHECK(res.ids.size() == 6);
}

TEST_CASE("fixed entry in a disconnected component stays there") {
  auto store = line_store({0.0f, 1.0f, 100.0f, 101.0f});
  AdjacencyGraph g(4);
  g.adj[0] = {edge(store, 0, 1)};
  g.adj[1] = {edge(store, 1, 0)};
  g.adj[2] = {edge(store, 2, 3)};
  g.adj[3] = {edge(store, 3, 2)};
  SearchParams p;
  p.L = 2;
  p.k = 1;
  p.entry = EntryMode::kFixedVertex;
  p.entry_vertex = 0;
  std::vector<float> q = {100.5f};  // true nearest is vertex 2
  auto res = search(g, store, q, p);
  REQUIRE(res.ids.size() == 1);
  CHECK(res.ids[0] == 1);  // best reachable from the entry component
}

TEST_CASE("search validates parameters") {
  auto store = synth_uniform(10, 3, 1);
  auto g = random_init(store, 2, 1);
  std::vector<float> q(3, 0.0f);
  SearchParams p;
  p.L = 4;
  p.k = 5;  // k > L
  CHECK_THROWS_AS(search(g, store, q, p), ParamError);
  p.k = 1;
  p.L = 0;
  CHECK_THROWS_AS(search(g, store, q, p), ParamError);
  p.L = 4;
  p.entry = EntryMode::kFixedVertex;
  p.entry_vertex = 10;
  CHECK_THROWS_AS(search(g, store, q, p), ParamError);
  p.entry = EntryMode::kRandomSample;
  std::vector<float> wrong(4, 0.0f);
  CHECK_THROWS_AS(search(g, store, wrong, p), ParamError);
}

TEST_CASE("search is deterministic and bounded") {
  auto store = synth_uniform(300, 6, 9);
  BuildParams bp;
  bp.S = 8;
  bp.R = 16;
  bp.T1 = 2;
  bp.T2 = 4;
  bp.threads = 1;
  auto g = build(store, bp);
  auto queries = synth_uniform(20, 6, 10);
  SearchParams p;
  p.L = 16;
  p.k = 4;
  for (size_t q = 0; q < queries.n; ++q) {
    auto a = search(g, store, queries.row(q), p);
    auto b = search(g, store, queries.row(q), p);
    CHECK(a.ids == b.ids);
    CHECK(a.dists == b.dists);
    CHECK(a.visited == b.visited);
    CHECK(a.dist_comps == b.dist_comps);
    CHECK(a.ids.size() == 4);
    CHECK(a.visited <= store.n);
    CHECK(a.dist_comps <= store.n);
    for (size_t j = 0; j + 1 < a.dists.size(); ++j)
      CHECK(a.dists[j] <= a.dists[j + 1]);
  }
}

TEST_CASE("batch search matches single-query search for any thread count") {
  auto store = synth_uniform(250, 5, 15);
  BuildParams bp;
  bp.S = 8;
  bp.R = 16;
  bp.T1 = 2;
  bp.T2 = 3;
  bp.threads = 1;
  auto g = build(store, bp);
  auto queries = synth_uniform(40, 5, 16);
  SearchParams p;
  p.L = 12;
  p.k = 3;
  BatchTiming timing;
  auto batch1 = batch_search(g, store, queries, p, 1, &timing);
  CHECK(timing.wall_seconds > 0.0);
  CHECK(timing.qps > 0.0);
  auto batch4 = batch_search(g, store, queries, p, 4);
  REQUIRE(batch1.size() == queries.n);
  REQUIRE(batch4.size() == queries.n);
  for (size_t q = 0; q < queries.n; ++q) {
    auto solo = search(g, store, queries.row(q), p);
    CHECK(batch1[q].ids == solo.ids);
    CHECK(batch4[q].ids == solo.ids);
    CHECK(batch1[q].dists == solo.dists);
    CHECK(batch4[q].dists == solo.dists);
  }
}

TEST_CASE("search works on deserialized graphs without distances") {
  // graphs loaded from disk have no cached distances; expansion then uses
  // the stored nearest-first prefix
  auto store = line_store({0.0f, 1.0f, 2.0f, 3.0f, 4.0f, 5.0f});
  AdjacencyGraph g(6);
  for (uint32_t i = 1; i <= 5; ++i)
    g.adj[0].push_back({i, 0.0f, false});  // already nearest-first
  g.has_distances = false;
  SearchParams p;
  p.L = 6;
  p.k = 3;
  p.K = 2;
  p.entry = EntryMode::kFixedVertex;
  p.entry_vertex = 0;
  std::vector<float> q = {0.0f};
  auto res = search(g, store, q, p);
  REQUIRE(res.ids.size() == 3);
  CHECK(res.ids[0] == 0);
  CHECK(res.ids[1] == 1);
  CHECK(res.ids[2] == 2);
}
