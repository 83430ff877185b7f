#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mcme/bn_model.hpp"
#include "mcme/ci_test.hpp"
#include "mcme/evaluation.hpp"
#include "mcme/info_theory.hpp"
#include "mcme/rng.hpp"
#include "test_support.hpp"

using namespace mcme;
using namespace test_support;

namespace {

Dag dag_of(int n, std::vector<std::vector<int>> parents) {
  Dag d;
  d.n_nodes = n;
  d.parents = std::move(parents);
  return d;
}

std::string nets_dir() { return std::string(MCME_SOURCE_DIR) + "/data/networks"; }

// All 25 directed acyclic graphs on three labeled nodes.
std::vector<Dag> all_three_node_dags() {
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) arcs.emplace_back(i, j);
  std::vector<Dag> out;
  for (int mask = 0; mask < (1 << 6); ++mask) {
    Dag d = dag_of(3, {{}, {}, {}});
    for (int k = 0; k < 6; ++k)
      if (mask & (1 << k)) d.parents[arcs[k].second].push_back(arcs[k].first);
    if (is_acyclic(d)) out.push_back(std::move(d));
  }
  return out;
}

bool same_structure(const Dag& a, const Dag& b) {
  for (int i = 0; i < a.n_nodes; ++i) {
    std::set<int> pa(a.parents[i].begin(), a.parents[i].end());
    std::set<int> pb(b.parents[i].begin(), b.parents[i].end());
    if (pa != pb) return false;
  }
  return true;
}

// x -> y -> z chain with an unrelated coin w; names a, b, c, d.
Dataset chain_data(int n, uint64_t seed) {
  std::vector<int32_t> x, y, z, w;
  for (int i = 0; i < n; ++i) {
    int32_t a = uniform01(seed, 0, i) < 0.5 ? 0 : 1;
    int32_t b = uniform01(seed, 1, i) < 0.15 ? 1 - a : a;
    int32_t c = uniform01(seed, 2, i) < 0.15 ? 1 - b : b;
    x.push_back(a);
    y.push_back(b);
    z.push_back(c);
    w.push_back(uniform01(seed, 3, i) < 0.5 ? 0 : 1);
  }
  return make_dataset({"a", "b", "c", "d"}, {2, 2, 2, 2}, {x, y, z, w});
}

bool runs_equal_ignoring_time(const BenchRun& a, const BenchRun& b) {
  return a.network == b.network && a.algorithm == b.algorithm &&
         a.seed == b.seed && a.n == b.n && a.failed == b.failed &&
         a.error == b.error && a.diff.a_g == b.diff.a_g &&
         a.diff.d_g == b.diff.d_g && a.diff.h_g == b.diff.h_g &&
         a.diff.trueadd_pct == b.diff.trueadd_pct &&
         a.diff.falseadd_pct == b.diff.falseadd_pct && a.bic == b.bic;
}

}  // namespace

TEST_CASE("identical graphs have zero distance and full edge recovery") {
  Dag g = dag_of(3, {{}, {0}, {0, 1}});
  StructureDiff d = structure_diff(g, g);
  CHECK(d.a_g == 0.0);
  CHECK(d.d_g == 0.0);
  CHECK(d.h_g == 0.0);
  CHECK(d.trueadd_pct == 100.0);
  CHECK(d.falseadd_pct == 0.0);
}

TEST_CASE("a reversed edge costs half an addition plus half a deletion") {
  StructureDiff d = structure_diff(dag_of(2, {{1}, {}}), dag_of(2, {{}, {0}}));
  CHECK(d.a_g == 0.5);
  CHECK(d.d_g == 0.5);
  CHECK(d.h_g == 1.0);
  CHECK(d.trueadd_pct == 100.0);  // same undirected edge
  CHECK(d.falseadd_pct == 0.0);
}

TEST_CASE("a spurious edge is half an addition and a false positive") {
  StructureDiff d = structure_diff(dag_of(3, {{}, {0}, {0}}),
                                   dag_of(3, {{}, {0}, {}}));
  CHECK(d.a_g == 0.5);
  CHECK(d.d_g == 0.0);
  CHECK(d.trueadd_pct == 100.0);
  CHECK(d.falseadd_pct == 100.0);
}

TEST_CASE("a missing edge is half a deletion and no false positive") {
  StructureDiff d = structure_diff(dag_of(3, {{}, {0}, {}}),
                                   dag_of(3, {{}, {0}, {0}}));
  CHECK(d.a_g == 0.0);
  CHECK(d.d_g == 0.5);
  CHECK(d.trueadd_pct == 50.0);
  CHECK(d.falseadd_pct == 0.0);
}

TEST_CASE("swapping the arguments swaps additions with deletions") {
  auto dags = all_three_node_dags();
  for (size_t i = 0; i < dags.size(); i += 3)
    for (size_t j = 0; j < dags.size(); j += 2) {
      StructureDiff ab = structure_diff(dags[i], dags[j]);
      StructureDiff ba = structure_diff(dags[j], dags[i]);
      CHECK(ab.a_g == ba.d_g);
      CHECK(ab.d_g == ba.a_g);
      CHECK(ab.h_g == ba.h_g);
    }
}

TEST_CASE("an empty reference graph yields zero percentages") {
  StructureDiff d = structure_diff(dag_of(3, {{}, {0}, {1}}),
                                   dag_of(3, {{}, {}, {}}));
  CHECK(d.a_g == 1.0);
  CHECK(d.d_g == 0.0);
  CHECK(d.trueadd_pct == 0.0);
  CHECK(d.falseadd_pct == 0.0);
}

TEST_CASE("graph distance behaves as a metric on all three-node graphs") {
  auto dags = all_three_node_dags();
  REQUIRE(dags.size() == 25);
  for (size_t i = 0; i < dags.size(); ++i)
    for (size_t j = 0; j < dags.size(); ++j) {
      double h = structure_diff(dags[i], dags[j]).h_g;
      CHECK((h == 0.0) == same_structure(dags[i], dags[j]));
      CHECK(h == structure_diff(dags[j], dags[i]).h_g);
    }
  for (size_t i = 0; i < dags.size(); i += 2)
    for (size_t j = 0; j < dags.size(); j += 3)
      for (size_t k = 0; k < dags.size(); k += 5) {
        double ij = structure_diff(dags[i], dags[j]).h_g;
        double jk = structure_diff(dags[j], dags[k]).h_g;
        double ik = structure_diff(dags[i], dags[k]).h_g;
        CHECK(ik <= ij + jk + 1e-12);
      }
}

TEST_CASE("graphs over different node counts cannot be compared") {
  CHECK(throws_kind(ErrorKind::Argument, [] {
    structure_diff(dag_of(2, {{}, {}}), dag_of(3, {{}, {}, {}}));
  }));
}

TEST_CASE("benchmark input validation") {
  McmeConfig cfg;
  CHECK(run_benchmark({}, cfg, {"hc"}, 100, {1}).empty());
  CHECK(throws_kind(ErrorKind::Argument, [&] {
    run_benchmark({nets_dir() + "/asia.net"}, cfg, {"tabu"}, 100, {1});
  }));
  CHECK(throws_kind(ErrorKind::Argument, [&] {
    run_benchmark({nets_dir() + "/asia.net"}, cfg, {"hc"}, 0, {1});
  }));
}

TEST_CASE("a bad network file fails its run without stopping the sweep") {
  McmeConfig cfg;
  auto runs = run_benchmark({nets_dir() + "/no_such.net", nets_dir() + "/asia.net"},
                            cfg, {"hc"}, 300, {5});
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].network == "no_such");
  CHECK(runs[0].failed);
  CHECK_FALSE(runs[0].error.empty());
  CHECK_FALSE(runs[1].failed);
  CHECK(runs[1].network == "asia");
  CHECK(runs[1].bic < 0.0);
}

TEST_CASE("benchmark results do not depend on the worker count") {
  McmeConfig cfg;
  std::vector<std::string> nets{nets_dir() + "/asia.net"};
  auto serial = run_benchmark(nets, cfg, {"mcme", "hc"}, 300, {1, 2}, 1);
  auto parallel = run_benchmark(nets, cfg, {"mcme", "hc"}, 300, {1, 2}, 3);
  REQUIRE(serial.size() == 4);
  REQUIRE(parallel.size() == 4);
  for (size_t i = 0; i < serial.size(); ++i)
    CHECK(runs_equal_ignoring_time(serial[i], parallel[i]));
}

TEST_CASE("bench reports round-trip through JSON") {
  McmeConfig cfg;
  auto runs = run_benchmark({nets_dir() + "/missing.net", nets_dir() + "/asia.net"},
                            cfg, {"hc"}, 200, {7});
  auto back = bench_report_from_json(bench_report_json(runs, cfg));
  REQUIRE(back.size() == runs.size());
  for (size_t i = 0; i < runs.size(); ++i) {
    CHECK(runs_equal_ignoring_time(back[i], runs[i]));
    CHECK(back[i].wall_time_s == runs[i].wall_time_s);
  }
}

TEST_CASE("CSV and table reports render one row per run") {
  McmeConfig cfg;
  auto runs = run_benchmark({nets_dir() + "/missing.net", nets_dir() + "/asia.net"},
                            cfg, {"hc"}, 200, {7});
  std::string csv = bench_report_csv(runs);
  std::string table = bench_report_table(runs);
  auto count_lines = [](const std::string& s) {
    size_t c = 0;
    for (char ch : s)
      if (ch == '\n') ++c;
    return c;
  };
  CHECK(count_lines(csv) == runs.size() + 1);
  CHECK(count_lines(table) == runs.size() + 1);
  CHECK(csv.rfind("network,algorithm,seed,n,failed,", 0) == 0);
  CHECK(table.find("FAILED") != std::string::npos);
}

TEST_CASE("explain lists every other variable before the conditioning curve") {
  Dataset data = chain_data(2000, 61);
  auto rows = explain_target(data, 0, 0.01, 2);
  REQUIRE(rows.size() >= 4);
  CHECK(rows[0].kind == "candidate");
  CHECK(rows[0].name == "b");
  CHECK(rows[1].name == "c");
  CHECK(rows[2].name == "d");
  for (int i = 0; i < 3; ++i) {
    CHECK(rows[i].dof >= 1);
    CHECK(close_rel(rows[i].quantile,
                    chi2_quantile(0.01, static_cast<double>(rows[i].dof)),
                    1e-9));
  }
  int k = 0;
  for (size_t i = 3; i < rows.size(); ++i) {
    CHECK(rows[i].kind == "curve");
    CHECK(rows[i].z_size == k++);
  }
}

TEST_CASE("conditioning on the mediator separates the far end of a chain") {
  Dataset data = chain_data(4000, 62);
  auto rows = explain_target(data, 0, 0.01, 2, 2);
  std::vector<ExplainRow> curve;
  for (const auto& r : rows)
    if (r.kind == "curve") curve.push_back(r);
  REQUIRE(curve.size() >= 2);
  CHECK(curve[0].z_size == 0);
  CHECK(curve[0].p_value < 1e-6);  // a and c are marginally dependent
  CHECK(curve[1].z_set == "b");    // strongest candidate conditions first
  CHECK(curve[1].p_value > 0.01);  // b blocks the path
  CHECK(curve[1].eemi_value < curve[0].eemi_value);
}

TEST_CASE("explain validates its target and pair arguments") {
  Dataset data = chain_data(200, 63);
  CHECK(throws_kind(ErrorKind::Argument,
                    [&] { explain_target(data, 9, 0.01, 2); }));
  CHECK(throws_kind(ErrorKind::Argument,
                    [&] { explain_target(data, 1, 0.01, 2, 1); }));
}
