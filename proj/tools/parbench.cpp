// rnnd-parbench: compare the strict sequential builder against the OpenMP
// builder and report timings, graph agreement and search quality for both.
// The two are different algorithm variants (the sequential pass applies
// redirected edges mid-scan, the parallel pass defers them), so edge sets may
// differ slightly; recall should not.

#include <cinttypes>
#include <cstdio>

#include <CLI11.hpp>

#include "rnnd/builder.hpp"
#include "rnnd/eval.hpp"
#include "rnnd/nndescent.hpp"
#include "rnnd/search.hpp"
#include "rnnd/vector_store.hpp"

using namespace rnnd;

namespace {

struct Variant {
  const char* name;
  int threads;
  double build_seconds = 0;
  double recall = 0;
  double qps = 0;
  double aod = 0;
};

double eval_recall(const AdjacencyGraph& g, const VectorStore& store,
                   const VectorStore& queries, const GroundTruth& gt,
                   int threads, double* qps) {
  SearchParams sp;
  sp.L = 32;
  sp.K = 32;
  sp.k = 1;
  BatchTiming timing;
  auto results = batch_search(g, store, queries, sp, threads, &timing);
  *qps = timing.qps;
  return recall_at_1(results, gt, store, queries);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential vs OpenMP builder comparison"};
  size_t n = 20000, d = 16, nq = 500;
  uint64_t seed = kDefaultSeed;
  int threads = 0;
  bool quick = false;
  app.add_option("--n", n, "vector count")->capture_default_str();
  app.add_option("--d", d, "dimension")->capture_default_str();
  app.add_option("--queries", nq, "query count")->capture_default_str();
  app.add_option("--seed", seed, "PRNG seed")->capture_default_str();
  app.add_option("--threads", threads, "parallel variant thread count, 0 = all")
      ->capture_default_str();
  app.add_flag("--quick", quick, "small sizes for smoke testing");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  if (quick) {
    n = 2000;
    d = 8;
    nq = 100;
  }

  try {
    const int par_threads =
        resolve_threads(threads) > 1 ? resolve_threads(threads) : 2;
    std::printf("data: n=%zu d=%zu queries=%zu seed=%" PRIu64 "\n", n, d, nq,
                seed);
    auto store = synth_uniform(n, d, seed);
    auto queries = synth_uniform(nq, d, seed + 1);
    auto gt = brute_force_gt(store, queries, 1);

    Variant serial{"sequential", 1};
    Variant parallel{"openmp", par_threads};
    BuildParams bp;
    bp.seed = seed;

    for (Variant* v : {&serial, &parallel}) {
      bp.threads = v->threads;
      BuildStats stats;
      auto g = build(store, bp, &stats);
      v->build_seconds = stats.seconds;
      v->aod = degree_stats(g).avg_out;
      v->recall = eval_recall(g, store, queries, gt, v->threads, &v->qps);
      std::printf(
          "%-10s threads=%d build_seconds=%.3f aod=%.2f recall@1=%.4f "
          "qps=%.1f\n",
          v->name, v->threads, v->build_seconds, v->aod, v->recall, v->qps);
    }
    std::printf("build_speedup=%.2fx recall_delta=%+.4f\n",
                serial.build_seconds / parallel.build_seconds,
                parallel.recall - serial.recall);

    // the baseline builder, for build-time context
    NnDescentParams np;
    np.seed = seed;
    np.threads = par_threads;
    np.K = std::min<uint32_t>(64, uint32_t(n - 1));
    BuildStats nstats;
    auto ng = build_nndescent(store, np, &nstats);
    double nqps = 0;
    double nrecall = eval_recall(ng, store, queries, gt, par_threads, &nqps);
    std::printf(
        "nn-descent threads=%d build_seconds=%.3f aod=%.2f recall@1=%.4f "
        "qps=%.1f\n",
        par_threads, nstats.seconds, degree_stats(ng).avg_out, nrecall, nqps);

    if (parallel.recall + 0.05 < serial.recall) {
      std::fprintf(stderr,
                   "error: parallel recall fell more than 0.05 below "
                   "sequential recall\n");
      return 3;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
