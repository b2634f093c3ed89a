#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rnnd/builder.hpp"
#include "rnnd/graph.hpp"
#include "rnnd/search.hpp"
#include "rnnd/vector_store.hpp"

namespace rnnd {

// One benchmark configuration. K == 0 means unlimited expansion degree and
// serializes as 0 in the CSV.
struct EvalRow {
  std::string dataset;
  size_t n = 0;
  size_t d = 0;
  std::string method;
  uint32_t S = 0, R = 0, T1 = 0, T2 = 0;
  uint32_t L = 0, K = 0;
  double recall_at_1 = 0.0;
  double qps = 0.0;
  double mean_latency_us = 0.0;
  double dist_comps_per_query = 0.0;
  double build_seconds = 0.0;
  bool pareto = false;
};

struct EvalReport {
  std::vector<EvalRow> rows;
};

// Fraction of queries whose top result is the true nearest neighbor. A result
// also counts when its id differs but its distance equals the true nearest
// distance exactly (co-located points).
double recall_at_1(const std::vector<SearchResult>& results,
                   const GroundTruth& gt, const VectorStore& base,
                   const VectorStore& queries);

// A row is Pareto-optimal unless some other row is at least as good in both
// recall and QPS and strictly better in one.
void mark_pareto(std::vector<EvalRow>& rows);

struct SweepOptions {
  uint32_t k = 1;
  uint64_t entry_seed = kDefaultSeed;
  int threads = 0;
  int reps = 3;       // timed repetitions; QPS is the median
  bool warmup = true; // one untimed pass first
};

// Static metadata copied into every produced row.
struct RowContext {
  std::string dataset = "synthetic";
  std::string method;
  uint32_t S = 0, R = 0, T1 = 0, T2 = 0;
  double build_seconds = 0.0;
};

// Recall/QPS grid over search parameters on a fixed graph.
EvalReport sweep_search(const AdjacencyGraph& g, const VectorStore& store,
                        const VectorStore& queries, const GroundTruth& gt,
                        const std::vector<uint32_t>& Ls,
                        const std::vector<uint32_t>& Ks,
                        const SweepOptions& opts, const RowContext& ctx);

// Rebuilds the graph for each (T1, T2) pair and evaluates with fixed search
// parameters. Used for constant-budget comparisons such as 1x60 vs 4x15.
EvalReport sweep_build(const VectorStore& store, const VectorStore& queries,
                       const GroundTruth& gt,
                       const std::vector<std::pair<uint32_t, uint32_t>>& t_pairs,
                       const BuildParams& base_params,
                       const SearchParams& search_params,
                       const SweepOptions& opts, const std::string& dataset);

struct AodRow {
  uint32_t cap;  // 0 = uncapped
  double aod;
};

// Average out-degree under each cap, plus the uncapped value as cap 0.
std::vector<AodRow> report_aod_table(const AdjacencyGraph& g,
                                     const std::vector<uint32_t>& caps);

std::string csv_header();
std::string csv_row(const EvalRow& row);
void write_csv(const EvalReport& report, const std::string& path);

}  // namespace rnnd
