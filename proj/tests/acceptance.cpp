// Acceptance suite: ten end-to-end checks, one [PASS]/[FAIL] line each.
// Run with no arguments for all ten, or with a single criterion number.
// Exit code 0 iff every executed criterion passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "rnnd/builder.hpp"
#include "rnnd/eval.hpp"
#include "rnnd/graph.hpp"
#include "rnnd/nndescent.hpp"
#include "rnnd/rng.hpp"
#include "rnnd/search.hpp"
#include "rnnd/vector_store.hpp"

namespace {

using namespace rnnd;

// Pinned budgets and thresholds.
constexpr int kSmallCases = 20;
constexpr double kC1BudgetSeconds = 120.0;
constexpr int kC3Trials = 100;
constexpr double kC4MinRecall = 0.95;
constexpr double kC4BuildBudgetSeconds = 60.0;
constexpr double kC5MaxRatio = 1.2;
constexpr double kC5BudgetSeconds = 600.0;
constexpr int kC6Reps = 5;
constexpr int kC6MinWins = 4;
constexpr double kC7MinReachable = 0.999;
constexpr int kC9Cases = 1000;
constexpr double kAodLow = 10.0;
constexpr double kAodHigh = 40.0;

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct SmallCase {
  VectorStore base;
  VectorStore queries;
  BuildParams params;
  AdjacencyGraph g;
};

// Artifacts shared between criteria, built on first use.
struct Artifacts {
  std::vector<SmallCase> small;         // criteria 1, 2, 8
  VectorStore mid_base, mid_queries;    // criteria 4, 6, 7, 8
  GroundTruth mid_gt;
  BuildParams mid_params;
  AdjacencyGraph mid_g;
  double mid_build_seconds = -1.0;

  VectorStore big_base;                 // criteria 5, 10
  AdjacencyGraph big_g;
  double big_rnn_seconds = -1.0;
  double big_nnd_seconds = -1.0;
  double big_total_seconds = -1.0;
};

void ensure_small(Artifacts& a) {
  if (!a.small.empty()) return;
  SplitMix64 rng(kDefaultSeed);
  for (int i = 0; i < kSmallCases; ++i) {
    SmallCase c;
    size_t n = 50 + rng.bounded(1951);
    size_t d = 2 + rng.bounded(31);
    c.base = synth_uniform(n, d, rng.next());
    c.queries = synth_uniform(100, d, rng.next());
    c.params.seed = rng.next();
    c.params.threads = 1;
    c.g = build(c.base, c.params);
    a.small.push_back(std::move(c));
  }
}

void ensure_mid(Artifacts& a) {
  if (a.mid_build_seconds >= 0.0) return;
  a.mid_base = synth_uniform(10000, 32, 42);
  a.mid_queries = synth_uniform(1000, 32, 43);
  a.mid_gt = brute_force_gt(a.mid_base, a.mid_queries, 1);
  a.mid_params.threads = 1;
  BuildStats st;
  a.mid_g = build(a.mid_base, a.mid_params, &st);
  a.mid_build_seconds = st.seconds;
}

// Descriptor-style stand-in: ambient dimension 128, intrinsic dimension 16.
void ensure_big(Artifacts& a) {
  if (a.big_total_seconds >= 0.0) return;
  double t0 = now_s();
  a.big_base = synth_lowdim(100000, 128, 16, 44);
  BuildParams bp;
  BuildStats rnn_st;
  a.big_g = build(a.big_base, bp, &rnn_st);
  a.big_rnn_seconds = rnn_st.seconds;
  NnDescentParams np;
  np.K = 64;
  np.iters = 10;
  BuildStats nnd_st;
  build_nndescent(a.big_base, np, &nnd_st);
  a.big_nnd_seconds = nnd_st.seconds;
  a.big_total_seconds = now_s() - t0;
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>());
}

std::string tmp_path(const char* stem) {
  auto dir = std::filesystem::temp_directory_path();
  return (dir / (std::string("rnnd_acc_") + stem)).string();
}

bool same_graph_bytes(const AdjacencyGraph& x, const AdjacencyGraph& y) {
  std::string px = tmp_path("x.idx"), py = tmp_path("y.idx");
  save_index(x, px);
  save_index(y, py);
  bool eq = slurp(px) == slurp(py);
  std::filesystem::remove(px);
  std::filesystem::remove(py);
  return eq;
}

// 1. Exhaustive search (L = n, unlimited K) must return the exact nearest
// neighbor for every query on every random dataset. With L = n the entry
// sample covers all vertices, so reachability holds by construction.
bool criterion_1(Artifacts& a) {
  double t0 = now_s();
  ensure_small(a);
  int exact = 0;
  for (auto& c : a.small) {
    GroundTruth gt = brute_force_gt(c.base, c.queries, 1);
    SearchParams sp;
    sp.L = uint32_t(c.base.n);
    sp.K = 0;
    sp.k = 1;
    auto res = batch_search(c.g, c.base, c.queries, sp, 1);
    if (recall_at_1(res, gt, c.base, c.queries) == 1.0) ++exact;
  }
  double total = now_s() - t0;
  bool ok = exact == kSmallCases && total < kC1BudgetSeconds;
  std::printf("[%s] criterion 1: exact NN on %d/%d datasets, %.1f s (budget %.0f s)\n",
              ok ? "PASS" : "FAIL", exact, kSmallCases, total, kC1BudgetSeconds);
  return ok;
}

// 2. Every final out-list is a fixed point of the selection filter.
bool criterion_2(Artifacts& a) {
  ensure_small(a);
  uint64_t checked = 0, violations = 0;
  for (auto& c : a.small) {
    for (uint32_t u = 0; u < c.g.size(); ++u) {
      auto kept = rng_strategy(c.base, u, c.g.adj[u]);
      ++checked;
      if (kept.size() != c.g.adj[u].size()) {
        ++violations;
        continue;
      }
      for (size_t i = 0; i < kept.size(); ++i)
        if (kept[i].id != c.g.adj[u][i].id) {
          ++violations;
          break;
        }
    }
  }
  bool ok = violations == 0;
  std::printf("[%s] criterion 2: selection fixed point, %llu lists, %llu violations\n",
              ok ? "PASS" : "FAIL", (unsigned long long)checked,
              (unsigned long long)violations);
  return ok;
}

// 3. Degree caps hold after every reverse-edge phase.
bool criterion_3(Artifacts&) {
  SplitMix64 rng(7);
  int violations = 0;
  for (int t = 0; t < kC3Trials; ++t) {
    size_t n = 20 + rng.bounded(481);
    size_t d = 2 + rng.bounded(15);
    uint32_t S = 1 + uint32_t(rng.bounded(std::min<uint64_t>(24, n - 1)));
    uint32_t R = 2 + uint32_t(rng.bounded(63));
    VectorStore store = synth_uniform(n, d, rng.next());
    AdjacencyGraph g = random_init(store, S, rng.next());
    if (t % 2) update_neighbors(g, store, 1);
    add_reverse_edges(g, R, 1,
                      t % 2 ? PruneOrder::kInThenOut : PruneOrder::kOutThenIn);
    auto st = degree_stats(g);
    if (st.max_out > R || st.max_in > R) ++violations;
  }
  bool ok = violations == 0;
  std::printf("[%s] criterion 3: degree caps in %d trials, %d violations\n",
              ok ? "PASS" : "FAIL", kC3Trials, violations);
  return ok;
}

// 4. Default build on 10k x 32 uniform data reaches R@1 >= 0.95 at
// L=64, K=32 and builds in under a minute single-threaded.
bool criterion_4(Artifacts& a) {
  ensure_mid(a);
  SearchParams sp;
  sp.L = 64;
  sp.K = 32;
  sp.k = 1;
  auto res = batch_search(a.mid_g, a.mid_base, a.mid_queries, sp, 1);
  double recall = recall_at_1(res, a.mid_gt, a.mid_base, a.mid_queries);
  bool ok = recall >= kC4MinRecall && a.mid_build_seconds < kC4BuildBudgetSeconds;
  std::printf("[%s] criterion 4: recall@1 %.4f (min %.2f), build %.1f s (budget %.0f s)\n",
              ok ? "PASS" : "FAIL", recall, kC4MinRecall, a.mid_build_seconds,
              kC4BuildBudgetSeconds);
  return ok;
}

// 5. Build time at most 1.2x the NN-Descent baseline on 100k x 128,
// equal thread count, whole comparison under ten minutes.
bool criterion_5(Artifacts& a) {
  ensure_big(a);
  double ratio = a.big_rnn_seconds / a.big_nnd_seconds;
  bool ok = ratio <= kC5MaxRatio && a.big_total_seconds < kC5BudgetSeconds;
  std::printf("[%s] criterion 5: build %.1f s vs baseline %.1f s, ratio %.2f "
              "(max %.1f), total %.1f s (budget %.0f s)\n",
              ok ? "PASS" : "FAIL", a.big_rnn_seconds, a.big_nnd_seconds, ratio,
              kC5MaxRatio, a.big_total_seconds, kC5BudgetSeconds);
  return ok;
}

// 6. Interleaving reverse-edge phases (4x15) beats one long update run
// (1x60) at fixed search settings in most seeded repetitions.
bool criterion_6(Artifacts& a) {
  ensure_mid(a);
  SearchParams sp;
  sp.L = 32;
  sp.K = 32;
  sp.k = 1;
  int wins = 0;
  for (int r = 0; r < kC6Reps; ++r) {
    BuildParams pa;
    pa.seed = 100 + uint64_t(r);
    BuildParams pb = pa;
    pb.T1 = 1;
    pb.T2 = 60;
    AdjacencyGraph ga = build(a.mid_base, pa);
    AdjacencyGraph gb = build(a.mid_base, pb);
    auto ra = batch_search(ga, a.mid_base, a.mid_queries, sp);
    auto rb = batch_search(gb, a.mid_base, a.mid_queries, sp);
    double qa = recall_at_1(ra, a.mid_gt, a.mid_base, a.mid_queries);
    double qb = recall_at_1(rb, a.mid_gt, a.mid_base, a.mid_queries);
    if (qa > qb) ++wins;
  }
  bool ok = wins >= kC6MinWins;
  std::printf("[%s] criterion 6: 4x15 beat 1x60 in %d/%d repetitions (need %d)\n",
              ok ? "PASS" : "FAIL", wins, kC6Reps, kC6MinWins);
  return ok;
}

// 7. Almost every vertex is reachable from a small random entry set.
bool criterion_7(Artifacts& a) {
  ensure_mid(a);
  const size_t n = a.mid_g.size();
  std::vector<char> seen(n, 0);
  std::vector<uint32_t> stack;
  SplitMix64 rng(kDefaultSeed);
  for (uint32_t id : sample_distinct(rng, uint32_t(n), 32)) {
    seen[id] = 1;
    stack.push_back(id);
  }
  size_t reached = stack.size();
  while (!stack.empty()) {
    uint32_t u = stack.back();
    stack.pop_back();
    for (const auto& e : a.mid_g.adj[u])
      if (!seen[e.id]) {
        seen[e.id] = 1;
        ++reached;
        stack.push_back(e.id);
      }
  }
  double frac = double(reached) / double(n);
  bool ok = frac >= kC7MinReachable;
  std::printf("[%s] criterion 7: %.4f of vertices reachable from 32 entries (min %.3f)\n",
              ok ? "PASS" : "FAIL", frac, kC7MinReachable);
  return ok;
}

// 8. Sequential builds with a fixed seed serialize byte-identically.
bool criterion_8(Artifacts& a) {
  ensure_small(a);
  ensure_mid(a);
  int mismatches = 0;
  for (auto& c : a.small) {
    AdjacencyGraph again = build(c.base, c.params);
    if (!same_graph_bytes(c.g, again)) ++mismatches;
  }
  AdjacencyGraph mid_again = build(a.mid_base, a.mid_params);
  if (!same_graph_bytes(a.mid_g, mid_again)) ++mismatches;
  bool ok = mismatches == 0;
  std::printf("[%s] criterion 8: %d byte-identical rebuilds, %d mismatches\n",
              ok ? "PASS" : "FAIL", kSmallCases + 1, mismatches);
  return ok;
}

// 9. Serialization identities for fvecs, ivecs and index files.
bool criterion_9(Artifacts&) {
  SplitMix64 rng(11);
  int failures = 0;
  std::string pv = tmp_path("c9.fvecs");
  std::string pi = tmp_path("c9.ivecs");
  std::string pg = tmp_path("c9.idx");
  std::string pg2 = tmp_path("c9b.idx");
  for (int t = 0; t < kC9Cases; ++t) {
    switch (t % 3) {
      case 0: {
        size_t n = 1 + rng.bounded(40), d = 1 + rng.bounded(16);
        VectorStore v = synth_uniform(n, d, rng.next());
        for (float& x : v.data) x = x * 2.0f - 1.0f;
        write_fvecs(v, pv);
        VectorStore w = load_fvecs(pv);
        if (w.n != v.n || w.d != v.d ||
            std::memcmp(w.data.data(), v.data.data(),
                        v.data.size() * sizeof(float)) != 0)
          ++failures;
        break;
      }
      case 1: {
        size_t rows = 1 + rng.bounded(40), k = 1 + rng.bounded(16);
        GroundTruth gt;
        gt.k = k;
        gt.ids.resize(rows * k);
        for (auto& id : gt.ids) id = uint32_t(rng.bounded(1000000));
        write_ivecs(gt, pi);
        GroundTruth back = load_ivecs(pi);
        if (back.k != gt.k || back.ids != gt.ids) ++failures;
        break;
      }
      default: {
        size_t n = 2 + rng.bounded(59), d = 2 + rng.bounded(3);
        uint32_t S = 1 + uint32_t(rng.bounded(std::min<uint64_t>(8, n - 1)));
        VectorStore store = synth_uniform(n, d, rng.next());
        AdjacencyGraph g = random_init(store, S, rng.next());
        if (t % 2) update_neighbors(g, store, 1);
        save_index(g, pg);
        AdjacencyGraph back = load_index(pg);
        bool same = back.size() == g.size() && !back.has_distances;
        for (size_t u = 0; same && u < g.size(); ++u) {
          same = back.adj[u].size() == g.adj[u].size();
          for (size_t i = 0; same && i < g.adj[u].size(); ++i)
            same = back.adj[u][i].id == g.adj[u][i].id;
        }
        save_index(back, pg2);
        if (!same || slurp(pg) != slurp(pg2)) ++failures;
        break;
      }
    }
  }
  for (auto& p : {pv, pi, pg, pg2}) std::filesystem::remove(p);
  bool ok = failures == 0;
  std::printf("[%s] criterion 9: %d round-trip cases, %d failures\n",
              ok ? "PASS" : "FAIL", kC9Cases, failures);
  return ok;
}

// 10. Average out-degree of the 100k build sits in a sane band and is
// nondecreasing in the search-time cap.
bool criterion_10(Artifacts& a) {
  ensure_big(a);
  auto rows = report_aod_table(a.big_g, {8, 16, 32, 64, 96});
  double uncapped = 0.0;
  bool monotone = true;
  double prev = 0.0;
  for (const auto& r : rows) {
    if (r.cap == 0) {
      uncapped = r.aod;
    } else {
      if (r.aod < prev) monotone = false;
      prev = r.aod;
    }
  }
  if (uncapped < prev) monotone = false;
  bool ok = uncapped >= kAodLow && uncapped <= kAodHigh && monotone;
  std::printf("[%s] criterion 10: uncapped AOD %.2f (band [%.0f, %.0f]), %s in cap\n",
              ok ? "PASS" : "FAIL", uncapped, kAodLow, kAodHigh,
              monotone ? "nondecreasing" : "NOT nondecreasing");
  return ok;
}

using CriterionFn = bool (*)(Artifacts&);
constexpr CriterionFn kCriteria[] = {
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (argc > 2 || only < 1 || only > 10) {
      std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
      return 2;
    }
  }
  Artifacts a;
  int failed = 0, ran = 0;
  for (int i = 1; i <= 10; ++i) {
    if (only && i != only) continue;
    ++ran;
    if (!kCriteria[i - 1](a)) ++failed;
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
