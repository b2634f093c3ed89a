// rnnd: build, query and benchmark RNN-Descent graph indexes.

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rnnd/builder.hpp"
#include "rnnd/eval.hpp"
#include "rnnd/graph.hpp"
#include "rnnd/metric.hpp"
#include "rnnd/nndescent.hpp"
#include "rnnd/search.hpp"
#include "rnnd/vector_store.hpp"

namespace {

using namespace rnnd;

void print_degree_summary(const AdjacencyGraph& g) {
  auto st = degree_stats(g);
  std::printf("n=%zu edges=%" PRIu64 " aod=%.3f max_out=%u max_in=%u\n",
              g.size(), st.edges, st.avg_out, st.max_out, st.max_in);
}

BuildProgressFn progress_logger() {
  return [](uint32_t t1, uint32_t T1, const EditCounts& e, double elapsed) {
    std::fprintf(stderr,
                 "[build] round %u/%u removed=%" PRIu64 " inserted=%" PRIu64
                 " checks=%" PRIu64 " skips=%" PRIu64 " elapsed=%.1fs\n",
                 t1, T1, e.removed, e.inserted, e.pair_checks, e.flag_skips,
                 elapsed);
  };
}

std::vector<std::pair<uint32_t, uint32_t>> parse_pairs(
    const std::vector<std::string>& specs) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (auto& s : specs) {
    unsigned a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%ux%u%c", &a, &b, &tail) != 2 || a == 0 ||
        b == 0)
      throw ParamError("--pairs entry '" + s + "' is not of the form T1xT2");
    out.emplace_back(a, b);
  }
  return out;
}

struct BuildOpts {
  std::string input, out;
  uint32_t S = 20, R = 96, T1 = 4, T2 = 15;
  uint64_t seed = kDefaultSeed;
  int threads = 0;
};

void do_build(const BuildOpts& o) {
  auto store = load_fvecs(o.input);
  BuildParams p;
  p.S = o.S;
  p.R = o.R;
  p.T1 = o.T1;
  p.T2 = o.T2;
  p.seed = o.seed;
  p.threads = o.threads;
  BuildStats stats;
  auto g = build(store, p, &stats, progress_logger());
  save_index(g, o.out);
  std::printf("build_seconds=%.3f threads=%d\n", stats.seconds,
              resolve_threads(o.threads));
  print_degree_summary(g);
}

struct NndOpts {
  std::string input, out;
  uint32_t K = 64, S = 10, iter = 10, pool = 0;
  uint64_t seed = kDefaultSeed;
  int threads = 0;
};

void do_nndescent_build(const NndOpts& o) {
  auto store = load_fvecs(o.input);
  NnDescentParams p;
  p.K = o.K;
  p.sample = o.S;
  p.iters = o.iter;
  p.pool = o.pool;
  p.seed = o.seed;
  p.threads = o.threads;
  BuildStats stats;
  auto g = build_nndescent(store, p, &stats);
  save_index(g, o.out);
  std::printf("build_seconds=%.3f threads=%d\n", stats.seconds,
              resolve_threads(o.threads));
  print_degree_summary(g);
}

struct GtOpts {
  std::string base, queries, out;
  uint32_t k = 1;
  int threads = 0;
};

void do_gt(const GtOpts& o) {
  auto base = load_fvecs(o.base);
  auto queries = load_fvecs(o.queries);
  auto gt = brute_force_gt(base, queries, o.k, o.threads);
  write_ivecs(gt, o.out);
  std::printf("queries=%zu k=%u threads=%d\n", queries.n, o.k,
              resolve_threads(o.threads));
}

struct SearchOpts {
  std::string index, base, queries, out;
  uint32_t L = 64, K = 0, k = 1;
  uint64_t seed = kDefaultSeed;
  int threads = 0;
};

void do_search(const SearchOpts& o) {
  auto g = load_index(o.index);
  auto base = load_fvecs(o.base);
  auto queries = load_fvecs(o.queries);
  attach_distances(g, base, o.threads);
  SearchParams p;
  p.L = o.L;
  p.K = o.K;
  p.k = o.k;
  p.seed = o.seed;
  BatchTiming timing;
  auto results = batch_search(g, base, queries, p, o.threads, &timing);
  double comps = 0, visited = 0;
  for (auto& r : results) {
    comps += double(r.dist_comps);
    visited += double(r.visited);
  }
  std::printf(
      "queries=%zu L=%u K=%u k=%u threads=%d qps=%.1f mean_latency_us=%.1f "
      "dist_comps_per_query=%.1f visited_per_query=%.1f\n",
      queries.n, o.L, o.K, o.k, resolve_threads(o.threads), timing.qps,
      timing.wall_seconds * 1e6 / double(queries.n),
      comps / double(queries.n), visited / double(queries.n));
  if (!o.out.empty()) {
    GroundTruth table;
    table.k = o.k;
    table.ids.reserve(queries.n * o.k);
    for (auto& r : results) {
      if (r.ids.size() < o.k)
        throw DataError("a query returned fewer than k results; not writing " +
                        o.out);
      table.ids.insert(table.ids.end(), r.ids.begin(), r.ids.end());
    }
    write_ivecs(table, o.out);
  }
}

struct BenchOpts {
  std::string index, base, queries, gt, csv;
  std::string dataset = "synthetic", method = "rnn-descent";
  std::vector<uint32_t> Ls, Ks;
  uint32_t S = 0, R = 0, T1 = 0, T2 = 0;  // labels only; 0 = not recorded
  double build_seconds = 0.0;
  int reps = 3;
  uint64_t seed = kDefaultSeed;
  int threads = 0;
};

void do_bench(const BenchOpts& o) {
  auto g = load_index(o.index);
  auto base = load_fvecs(o.base);
  auto queries = load_fvecs(o.queries);
  auto gt = load_ivecs(o.gt);
  validate_ids(gt, base.n);
  if (gt.rows() != queries.n)
    throw DataError("ground truth row count does not match query count");
  attach_distances(g, base, o.threads);
  SweepOptions opts;
  opts.threads = o.threads;
  opts.reps = o.reps;
  opts.entry_seed = o.seed;
  RowContext ctx;
  ctx.dataset = o.dataset;
  ctx.method = o.method;
  ctx.S = o.S;
  ctx.R = o.R;
  ctx.T1 = o.T1;
  ctx.T2 = o.T2;
  ctx.build_seconds = o.build_seconds;
  auto report = sweep_search(g, base, queries, gt, o.Ls, o.Ks, opts, ctx);
  write_csv(report, o.csv);
  const int nt = resolve_threads(o.threads);
  for (auto& r : report.rows)
    std::printf("L=%u K=%u threads=%d recall@1=%.4f qps=%.1f pareto=%d\n", r.L,
                r.K, nt, r.recall_at_1, r.qps, r.pareto ? 1 : 0);
  std::printf("rows=%zu csv=%s\n", report.rows.size(), o.csv.c_str());
}

struct SweepTOpts {
  std::string input, queries, gt, csv;
  std::string dataset = "synthetic";
  std::vector<std::string> pairs;
  uint32_t S = 20, R = 96, L = 32, K = 32;
  int reps = 3;
  uint64_t seed = kDefaultSeed;
  int threads = 0;
};

void do_sweep_t(const SweepTOpts& o) {
  auto store = load_fvecs(o.input);
  auto queries = load_fvecs(o.queries);
  auto gt = load_ivecs(o.gt);
  validate_ids(gt, store.n);
  if (gt.rows() != queries.n)
    throw DataError("ground truth row count does not match query count");
  BuildParams bp;
  bp.S = o.S;
  bp.R = o.R;
  bp.seed = o.seed;
  bp.threads = o.threads;
  SearchParams sp;
  sp.L = o.L;
  sp.K = o.K;
  sp.k = 1;
  sp.seed = o.seed;
  SweepOptions opts;
  opts.threads = o.threads;
  opts.reps = o.reps;
  opts.entry_seed = o.seed;
  auto report = sweep_build(store, queries, gt, parse_pairs(o.pairs), bp, sp,
                            opts, o.dataset);
  write_csv(report, o.csv);
  const int nt = resolve_threads(o.threads);
  for (auto& r : report.rows)
    std::printf(
        "T1=%u T2=%u threads=%d recall@1=%.4f qps=%.1f build_seconds=%.3f\n",
        r.T1, r.T2, nt, r.recall_at_1, r.qps, r.build_seconds);
  std::printf("rows=%zu csv=%s\n", report.rows.size(), o.csv.c_str());
}

struct StatsOpts {
  std::string index;
  std::vector<uint32_t> Ks;
};

void do_stats(const StatsOpts& o) {
  auto g = load_index(o.index);
  print_degree_summary(g);
  auto st = degree_stats(g);
  std::printf("out_degree_histogram:\n");
  for (size_t deg = 0; deg < st.out_hist.size(); ++deg)
    if (st.out_hist[deg])
      std::printf("  %zu %" PRIu64 "\n", deg, st.out_hist[deg]);
  std::printf("in_degree_histogram:\n");
  for (size_t deg = 0; deg < st.in_hist.size(); ++deg)
    if (st.in_hist[deg])
      std::printf("  %zu %" PRIu64 "\n", deg, st.in_hist[deg]);
  std::printf("aod_table:\n");
  for (auto& row : report_aod_table(g, o.Ks)) {
    if (row.cap == 0)
      std::printf("  K=unlimited aod=%.3f\n", row.aod);
    else
      std::printf("  K=%u aod=%.3f\n", row.cap, row.aod);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RNN-Descent graph index: build, search, benchmark"};
  app.require_subcommand(1);

  BuildOpts bo;
  auto* sb = app.add_subcommand("build", "build an index with RNN-Descent");
  sb->add_option("--input", bo.input, "base vectors (fvecs)")->required();
  sb->add_option("--out", bo.out, "output index file")->required();
  sb->add_option("--S", bo.S, "start degree")->check(CLI::Range(1u, 1u << 20))
      ->capture_default_str();
  sb->add_option("--R", bo.R, "reverse-phase degree cap")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  sb->add_option("--T1", bo.T1, "outer iterations")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  sb->add_option("--T2", bo.T2, "update passes per outer iteration")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  sb->add_option("--seed", bo.seed, "PRNG seed")->capture_default_str();
  sb->add_option("--threads", bo.threads, "0 = all hardware threads")
      ->capture_default_str();

  NndOpts no;
  auto* sn = app.add_subcommand("nndescent-build",
                                "build an index with the NN-Descent baseline");
  sn->add_option("--input", no.input, "base vectors (fvecs)")->required();
  sn->add_option("--out", no.out, "output index file")->required();
  sn->add_option("--K", no.K, "final out-degree")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  sn->add_option("--S", no.S, "per-pass fresh-join cap")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  sn->add_option("--iter", no.iter, "join passes")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  sn->add_option("--pool", no.pool, "candidate pool capacity, 0 = 2*K")
      ->capture_default_str();
  sn->add_option("--seed", no.seed, "PRNG seed")->capture_default_str();
  sn->add_option("--threads", no.threads, "0 = all hardware threads")
      ->capture_default_str();

  GtOpts go;
  auto* sg = app.add_subcommand("gt", "exact ground truth by brute force");
  sg->add_option("--base", go.base, "base vectors (fvecs)")->required();
  sg->add_option("--queries", go.queries, "query vectors (fvecs)")->required();
  sg->add_option("--k", go.k, "neighbors per query")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  sg->add_option("--out", go.out, "output table (ivecs)")->required();
  sg->add_option("--threads", go.threads, "0 = all hardware threads")
      ->capture_default_str();

  SearchOpts so;
  auto* ss = app.add_subcommand("search", "batch query an index");
  ss->add_option("--index", so.index, "index file")->required();
  ss->add_option("--base", so.base, "base vectors (fvecs)")->required();
  ss->add_option("--queries", so.queries, "query vectors (fvecs)")->required();
  ss->add_option("--L", so.L, "candidate pool size")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  ss->add_option("--K", so.K, "expansion degree cap, 0 = unlimited")
      ->capture_default_str();
  ss->add_option("--k", so.k, "results per query")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  ss->add_option("--seed", so.seed, "entry-sample seed")->capture_default_str();
  ss->add_option("--threads", so.threads, "0 = all hardware threads")
      ->capture_default_str();
  ss->add_option("--out", so.out, "write result ids (ivecs)");

  BenchOpts eo;
  auto* se = app.add_subcommand("bench", "recall/QPS sweep over (L, K)");
  se->add_option("--index", eo.index, "index file")->required();
  se->add_option("--base", eo.base, "base vectors (fvecs)")->required();
  se->add_option("--queries", eo.queries, "query vectors (fvecs)")->required();
  se->add_option("--gt", eo.gt, "ground truth (ivecs)")->required();
  se->add_option("--L", eo.Ls, "pool sizes, comma separated")
      ->required()->delimiter(',');
  se->add_option("--K", eo.Ks, "degree caps, comma separated, 0 = unlimited")
      ->delimiter(',')->default_val(std::vector<uint32_t>{0});
  se->add_option("--csv", eo.csv, "output CSV path")->required();
  se->add_option("--dataset", eo.dataset, "dataset label for the CSV")
      ->capture_default_str();
  se->add_option("--method", eo.method, "method label for the CSV")
      ->capture_default_str();
  se->add_option("--build-seconds", eo.build_seconds,
                 "build time to record in the CSV")->capture_default_str();
  se->add_option("--S", eo.S, "build S to record in the CSV");
  se->add_option("--R", eo.R, "build R to record in the CSV");
  se->add_option("--T1", eo.T1, "build T1 to record in the CSV");
  se->add_option("--T2", eo.T2, "build T2 to record in the CSV");
  se->add_option("--reps", eo.reps, "timed repetitions (median QPS)")
      ->check(CLI::Range(1, 1000))->capture_default_str();
  se->add_option("--seed", eo.seed, "entry-sample seed")->capture_default_str();
  se->add_option("--threads", eo.threads, "0 = all hardware threads")
      ->capture_default_str();

  SweepTOpts to;
  auto* st = app.add_subcommand(
      "sweep-t", "rebuild per (T1, T2) pair and evaluate at fixed (L, K)");
  st->add_option("--input", to.input, "base vectors (fvecs)")->required();
  st->add_option("--queries", to.queries, "query vectors (fvecs)")->required();
  st->add_option("--gt", to.gt, "ground truth (ivecs)")->required();
  st->add_option("--pairs", to.pairs, "T1xT2 list, e.g. 4x15,1x60")
      ->required()->delimiter(',');
  st->add_option("--csv", to.csv, "output CSV path")->required();
  st->add_option("--S", to.S, "start degree")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  st->add_option("--R", to.R, "reverse-phase degree cap")
      ->check(CLI::Range(1u, 1u << 20))->capture_default_str();
  st->add_option("--L", to.L, "pool size")->check(CLI::Range(1u, 1u << 20))
      ->capture_default_str();
  st->add_option("--K", to.K, "degree cap, 0 = unlimited")
      ->capture_default_str();
  st->add_option("--dataset", to.dataset, "dataset label for the CSV")
      ->capture_default_str();
  st->add_option("--reps", to.reps, "timed repetitions (median QPS)")
      ->check(CLI::Range(1, 1000))->capture_default_str();
  st->add_option("--seed", to.seed, "build and entry seed")
      ->capture_default_str();
  st->add_option("--threads", to.threads, "0 = all hardware threads")
      ->capture_default_str();

  StatsOpts oo;
  auto* sso = app.add_subcommand("stats", "degree histograms and AOD table");
  sso->add_option("--index", oo.index, "index file")->required();
  sso->add_option("--K", oo.Ks, "degree caps for the AOD table")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sb->parsed()) do_build(bo);
    if (sn->parsed()) do_nndescent_build(no);
    if (sg->parsed()) do_gt(go);
    if (ss->parsed()) do_search(so);
    if (se->parsed()) do_bench(eo);
    if (st->parsed()) do_sweep_t(to);
    if (sso->parsed()) do_stats(oo);
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
