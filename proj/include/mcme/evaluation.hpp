#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "mcme/bn_model.hpp"
#include "mcme/dataset.hpp"
#include "mcme/mcme_pipeline.hpp"

namespace mcme {

struct StructureDiff {
  double a_g = 0.0;          // added: 1/2 sum |pa_learned \ pa_truth|
  double d_g = 0.0;          // deleted: 1/2 sum |pa_truth \ pa_learned|
  double h_g = 0.0;          // a_g + d_g
  double trueadd_pct = 0.0;  // learned undirected edges found in truth, % of truth
  double falseadd_pct = 0.0; // learned undirected edges absent from truth, %
};

// Node universes must match (Argument error otherwise).
StructureDiff structure_diff(const Dag& learned, const Dag& truth);

struct BenchRun {
  std::string network;      // file stem
  std::string algorithm;    // "mcme" or "hc"
  uint64_t seed = 0;
  int n = 0;
  bool failed = false;
  std::string error;
  StructureDiff diff;
  double bic = 0.0;
  double wall_time_s = 0.0;
};

// For each net file x seed: sample, run each selected algorithm, score and
// diff against the truth. Per-run failures are recorded and the sweep
// continues. Results are deterministic; only wall times vary.
std::vector<BenchRun> run_benchmark(const std::vector<std::string>& net_paths,
                                    const McmeConfig& cfg,
                                    const std::vector<std::string>& algorithms,
                                    int n,
                                    const std::vector<uint64_t>& seeds,
                                    int jobs = 1);

std::string bench_report_json(const std::vector<BenchRun>& runs,
                              const McmeConfig& cfg);
std::string bench_report_csv(const std::vector<BenchRun>& runs);
std::string bench_report_table(const std::vector<BenchRun>& runs);
std::vector<BenchRun> bench_report_from_json(const std::string& text);

// Diagnostic rows behind the explain command. Candidate rows carry the
// unconditional test and screening value for every candidate; curve rows
// condition the (target, pair) test on a growing prefix of the remaining
// candidates ordered by ascending unconditional p.
struct ExplainRow {
  std::string kind;          // "candidate" or "curve"
  std::string name;          // candidate name, or z-set summary for curves
  int z_size = 0;
  std::string z_set;
  double g2 = 0.0;
  int64_t dof = 1;
  double p_value = 1.0;
  double quantile = 0.0;     // upper-alpha chi-square quantile at this dof
  double eemi_value = 0.0;
};

std::vector<ExplainRow> explain_target(const Dataset& data, int target,
                                       double alpha, int max_cond,
                                       int pair = -1);

}  // namespace mcme
