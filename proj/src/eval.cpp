#include "rnnd/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "rnnd/metric.hpp"

namespace rnnd {

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

EvalRow measure_point(const AdjacencyGraph& g, const VectorStore& store,
                      const VectorStore& queries, const GroundTruth& gt,
                      const SearchParams& sp, const SweepOptions& opts,
                      const RowContext& ctx) {
  if (opts.reps < 1) throw ParamError("sweep: reps must be >= 1");
  if (opts.warmup) batch_search(g, store, queries, sp, opts.threads);
  std::vector<double> walls;
  std::vector<SearchResult> results;
  for (int r = 0; r < opts.reps; ++r) {
    BatchTiming t;
    results = batch_search(g, store, queries, sp, opts.threads, &t);
    walls.push_back(t.wall_seconds);
  }
  double wall = median(walls);
  double comps = 0;
  for (auto& r : results) comps += double(r.dist_comps);

  EvalRow row;
  row.dataset = ctx.dataset;
  row.n = store.n;
  row.d = store.d;
  row.method = ctx.method;
  row.S = ctx.S;
  row.R = ctx.R;
  row.T1 = ctx.T1;
  row.T2 = ctx.T2;
  row.L = sp.L;
  row.K = sp.K;
  row.recall_at_1 = recall_at_1(results, gt, store, queries);
  row.qps = wall > 0 ? double(queries.n) / wall : 0.0;
  row.mean_latency_us = queries.n ? wall * 1e6 / double(queries.n) : 0.0;
  row.dist_comps_per_query = queries.n ? comps / double(queries.n) : 0.0;
  row.build_seconds = ctx.build_seconds;
  return row;
}

}  // namespace

double recall_at_1(const std::vector<SearchResult>& results,
                   const GroundTruth& gt, const VectorStore& base,
                   const VectorStore& queries) {
  if (gt.k < 1) throw ParamError("recall_at_1: ground truth has no columns");
  if (results.size() != gt.rows() || results.size() != queries.n)
    throw ParamError("recall_at_1: result/ground-truth count mismatch");
  validate_ids(gt, base.n);
  size_t hits = 0;
  for (size_t q = 0; q < results.size(); ++q) {
    if (results[q].ids.empty()) continue;
    uint32_t truth = gt.row(q)[0];
    if (results[q].ids[0] == truth) {
      ++hits;
      continue;
    }
    float truth_dist = l2_sq(queries.row(q), base.row(truth));
    if (results[q].dists[0] == truth_dist) ++hits;
  }
  return results.empty() ? 0.0 : double(hits) / double(results.size());
}

void mark_pareto(std::vector<EvalRow>& rows) {
  for (auto& r : rows) {
    r.pareto = true;
    for (auto& o : rows) {
      if (&o == &r) continue;
      bool as_good = o.recall_at_1 >= r.recall_at_1 && o.qps >= r.qps;
      bool better = o.recall_at_1 > r.recall_at_1 || o.qps > r.qps;
      if (as_good && better) {
        r.pareto = false;
        break;
      }
    }
  }
}

EvalReport sweep_search(const AdjacencyGraph& g, const VectorStore& store,
                        const VectorStore& queries, const GroundTruth& gt,
                        const std::vector<uint32_t>& Ls,
                        const std::vector<uint32_t>& Ks,
                        const SweepOptions& opts, const RowContext& ctx) {
  if (Ls.empty() || Ks.empty()) throw ParamError("sweep_search: empty L or K list");
  EvalReport report;
  for (uint32_t L : Ls) {
    for (uint32_t K : Ks) {
      SearchParams sp;
      sp.L = L;
      sp.K = K;
      sp.k = opts.k;
      sp.seed = opts.entry_seed;
      report.rows.push_back(
          measure_point(g, store, queries, gt, sp, opts, ctx));
    }
  }
  mark_pareto(report.rows);
  return report;
}

EvalReport sweep_build(const VectorStore& store, const VectorStore& queries,
                       const GroundTruth& gt,
                       const std::vector<std::pair<uint32_t, uint32_t>>& t_pairs,
                       const BuildParams& base_params,
                       const SearchParams& search_params,
                       const SweepOptions& opts, const std::string& dataset) {
  if (t_pairs.empty()) throw ParamError("sweep_build: empty (T1, T2) list");
  EvalReport report;
  for (auto [T1, T2] : t_pairs) {
    BuildParams bp = base_params;
    bp.T1 = T1;
    bp.T2 = T2;
    BuildStats stats;
    AdjacencyGraph g = build(store, bp, &stats);
    RowContext ctx;
    ctx.dataset = dataset;
    ctx.method = "rnn-descent";
    ctx.S = bp.S;
    ctx.R = bp.R;
    ctx.T1 = T1;
    ctx.T2 = T2;
    ctx.build_seconds = stats.seconds;
    report.rows.push_back(
        measure_point(g, store, queries, gt, search_params, opts, ctx));
  }
  mark_pareto(report.rows);
  return report;
}

std::vector<AodRow> report_aod_table(const AdjacencyGraph& g,
                                     const std::vector<uint32_t>& caps) {
  std::vector<AodRow> rows;
  for (uint32_t cap : caps)
    rows.push_back({cap, degree_stats(g, cap).avg_out});
  bool have_uncapped = std::find(caps.begin(), caps.end(), 0u) != caps.end();
  if (!have_uncapped) rows.push_back({0, degree_stats(g, 0).avg_out});
  return rows;
}

std::string csv_header() {
  return "dataset,n,d,method,S,R,T1,T2,L,K,recall_at_1,qps,mean_latency_us,"
         "dist_comps_per_query,build_seconds,pareto";
}

std::string csv_row(const EvalRow& r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "%s,%zu,%zu,%s,%u,%u,%u,%u,%u,%u,%.6f,%.3f,%.3f,%.2f,%.3f,%d",
                r.dataset.c_str(), r.n, r.d, r.method.c_str(), r.S, r.R, r.T1,
                r.T2, r.L, r.K, r.recall_at_1, r.qps, r.mean_latency_us,
                r.dist_comps_per_query, r.build_seconds, r.pareto ? 1 : 0);
  return buf;
}

void write_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << csv_header() << '\n';
  for (auto& r : report.rows) out << csv_row(r) << '\n';
  out.flush();
  if (!out) throw DataError(path + ": write failed");
}

}  // namespace rnnd
