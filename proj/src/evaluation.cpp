#include "mcme/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mcme/baseline_scores.hpp"
#include "mcme/ci_test.hpp"
#include "mcme/errors.hpp"
#include "mcme/info_theory.hpp"
#include "mcme/tn_orientation.hpp"

namespace mcme {

StructureDiff structure_diff(const Dag& learned, const Dag& truth) {
  if (learned.n_nodes != truth.n_nodes)
    throw Error(ErrorKind::Argument, "structure_diff: node count mismatch");
  int n = learned.n_nodes;
  StructureDiff d;
  std::set<std::pair<int, int>> und_l, und_t;
  for (int i = 0; i < n; ++i) {
    std::set<int> pl(learned.parents[i].begin(), learned.parents[i].end());
    std::set<int> pt(truth.parents[i].begin(), truth.parents[i].end());
    for (int p : pl) {
      if (!pt.count(p)) d.a_g += 0.5;
      und_l.insert({std::min(p, i), std::max(p, i)});
    }
    for (int p : pt) {
      if (!pl.count(p)) d.d_g += 0.5;
      und_t.insert({std::min(p, i), std::max(p, i)});
    }
  }
  d.h_g = d.a_g + d.d_g;
  if (!und_t.empty()) {
    int hits = 0;
    for (const auto& e : und_l)
      if (und_t.count(e)) ++hits;
    d.trueadd_pct = 100.0 * hits / static_cast<double>(und_t.size());
    d.falseadd_pct = 100.0 * (static_cast<double>(und_l.size()) - hits) /
                     static_cast<double>(und_t.size());
  }
  return d;
}

// ---------------------------------------------------------------------------
// Benchmark harness
// ---------------------------------------------------------------------------

std::vector<BenchRun> run_benchmark(const std::vector<std::string>& net_paths,
                                    const McmeConfig& cfg,
                                    const std::vector<std::string>& algorithms,
                                    int n,
                                    const std::vector<uint64_t>& seeds,
                                    int jobs) {
  if (n < 1) throw Error(ErrorKind::Argument, "run_benchmark: n must be >= 1");
  for (const auto& a : algorithms)
    if (a != "mcme" && a != "hc")
      throw Error(ErrorKind::Argument, "unknown algorithm: " + a);

  struct Unit {
    std::string path;
    std::string stem;
    uint64_t seed;
    std::string alg;
  };
  std::vector<Unit> units;
  for (const auto& path : net_paths) {
    std::string stem = std::filesystem::path(path).stem().string();
    for (uint64_t seed : seeds)
      for (const auto& alg : algorithms) units.push_back({path, stem, seed, alg});
  }

  std::vector<BenchRun> runs(units.size());
  auto run_unit = [&](size_t i) {
    const Unit& u = units[i];
    BenchRun r;
    r.network = u.stem;
    r.algorithm = u.alg;
    r.seed = u.seed;
    r.n = n;
    try {
      BayesNet net = parse_network(u.path);
      Dataset data = forward_sample(net, n, u.seed);
      auto t0 = std::chrono::steady_clock::now();
      Dag learned;
      if (u.alg == "mcme") {
        Skeleton sk = build_skeleton(data, cfg);
        learned = generate_dag(data, sk, cfg.lambda_hat).dag;
      } else {
        learned = hill_climb(data);
      }
      auto t1 = std::chrono::steady_clock::now();
      r.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
      r.diff = structure_diff(learned, net.dag);
      r.bic = bic_score(data, learned).total;
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
    runs[i] = std::move(r);
  };

  if (jobs <= 1) {
    for (size_t i = 0; i < units.size(); ++i) run_unit(i);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < units.size();
           i = next.fetch_add(1))
        run_unit(i);
    };
    std::vector<std::thread> pool;
    size_t k = std::min<size_t>(jobs, units.size());
    for (size_t i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return runs;
}

namespace {

nlohmann::ordered_json diff_json(const StructureDiff& d) {
  return {{"a_g", d.a_g},
          {"d_g", d.d_g},
          {"h_g", d.h_g},
          {"trueadd_pct", d.trueadd_pct},
          {"falseadd_pct", d.falseadd_pct}};
}

nlohmann::ordered_json config_json(const McmeConfig& cfg) {
  return {{"ct_layer", cfg.citm.layers},   {"ct_memory", cfg.citm.memory},
          {"ct_alpha", cfg.citm.alpha},    {"ee_layer", cfg.eemi.layers},
          {"ee_memory", cfg.eemi.memory},  {"ee_alpha", cfg.eemi.alpha},
          {"lambda_hat", cfg.lambda_hat}};
}

}  // namespace

std::string bench_report_json(const std::vector<BenchRun>& runs,
                              const McmeConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["config"] = config_json(cfg);
  doc["runs"] = nlohmann::ordered_json::array();
  for (const auto& r : runs) {
    nlohmann::ordered_json jr{{"network", r.network},
                              {"algorithm", r.algorithm},
                              {"seed", r.seed},
                              {"n", r.n},
                              {"failed", r.failed}};
    if (r.failed) {
      jr["error"] = r.error;
    } else {
      jr["diff"] = diff_json(r.diff);
      jr["bic"] = r.bic;
    }
    jr["meta"] = {{"wall_time_s", r.wall_time_s}};
    doc["runs"].push_back(std::move(jr));
  }
  return doc.dump(2) + "\n";
}

std::vector<BenchRun> bench_report_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  std::vector<BenchRun> runs;
  for (const auto& jr : doc.at("runs")) {
    BenchRun r;
    r.network = jr.at("network").get<std::string>();
    r.algorithm = jr.at("algorithm").get<std::string>();
    r.seed = jr.at("seed").get<uint64_t>();
    r.n = jr.at("n").get<int>();
    r.failed = jr.at("failed").get<bool>();
    if (r.failed) {
      r.error = jr.at("error").get<std::string>();
    } else {
      const auto& d = jr.at("diff");
      r.diff.a_g = d.at("a_g").get<double>();
      r.diff.d_g = d.at("d_g").get<double>();
      r.diff.h_g = d.at("h_g").get<double>();
      r.diff.trueadd_pct = d.at("trueadd_pct").get<double>();
      r.diff.falseadd_pct = d.at("falseadd_pct").get<double>();
      r.bic = jr.at("bic").get<double>();
    }
    r.wall_time_s = jr.at("meta").at("wall_time_s").get<double>();
    runs.push_back(std::move(r));
  }
  return runs;
}

std::string bench_report_csv(const std::vector<BenchRun>& runs) {
  std::ostringstream out;
  out << "network,algorithm,seed,n,failed,a_g,d_g,h_g,trueadd_pct,"
         "falseadd_pct,bic,wall_time_s\n";
  for (const auto& r : runs) {
    out << r.network << ',' << r.algorithm << ',' << r.seed << ',' << r.n
        << ',' << (r.failed ? 1 : 0) << ',';
    if (r.failed)
      out << ",,,,,";
    else
      out << r.diff.a_g << ',' << r.diff.d_g << ',' << r.diff.h_g << ','
          << r.diff.trueadd_pct << ',' << r.diff.falseadd_pct << ',' << r.bic;
    out << ',' << r.wall_time_s << '\n';
  }
  return out.str();
}

std::string bench_report_table(const std::vector<BenchRun>& runs) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %-6s %6s %8s %8s %10s %12s %10s\n",
                "network", "alg", "seed", "H(G)", "trueadd", "falseadd", "BIC",
                "time(s)");
  out << line;
  for (const auto& r : runs) {
    if (r.failed) {
      std::snprintf(line, sizeof(line), "%-10s %-6s %6llu FAILED: %s\n",
                    r.network.c_str(), r.algorithm.c_str(),
                    static_cast<unsigned long long>(r.seed), r.error.c_str());
    } else {
      std::snprintf(line, sizeof(line),
                    "%-10s %-6s %6llu %8.1f %7.1f%% %9.1f%% %12.2f %10.3f\n",
                    r.network.c_str(), r.algorithm.c_str(),
                    static_cast<unsigned long long>(r.seed), r.diff.h_g,
                    r.diff.trueadd_pct, r.diff.falseadd_pct, r.bic,
                    r.wall_time_s);
    }
    out << line;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Explain diagnostics
// ---------------------------------------------------------------------------

std::vector<ExplainRow> explain_target(const Dataset& data, int target,
                                       double alpha, int max_cond, int pair) {
  if (target < 0 || target >= data.n_vars())
    throw Error(ErrorKind::Argument, "explain_target: target out of range");
  if (pair == target)
    throw Error(ErrorKind::Argument, "explain_target: pair equals target");
  std::vector<ExplainRow> rows;
  std::vector<int> candidates;
  for (int v = 0; v < data.n_vars(); ++v)
    if (v != target) candidates.push_back(v);
  if (candidates.empty()) return rows;

  std::vector<std::pair<double, int>> order;  // (log_p, index), ascending
  for (int c : candidates) {
    CiResult r = assoc(data, target, c, {}, alpha);
    ExplainRow row;
    row.kind = "candidate";
    row.name = data.variables[c].name;
    row.g2 = r.g2;
    row.dof = r.dof;
    row.p_value = r.p_value;
    row.quantile = chi2_quantile(alpha, static_cast<double>(r.dof));
    row.eemi_value = eemi(data, target, c);
    rows.push_back(std::move(row));
    order.push_back({r.log_p, c});
  }
  std::sort(order.begin(), order.end());

  int y = pair >= 0 ? pair : order.front().second;
  std::vector<int> pool;
  for (const auto& [lp, c] : order)
    if (c != y) pool.push_back(c);
  if (static_cast<int>(pool.size()) > max_cond) pool.resize(max_cond);

  for (int k = 0; k <= static_cast<int>(pool.size()); ++k) {
    std::vector<int> zset(pool.begin(), pool.begin() + k);
    ExplainRow row;
    row.kind = "curve";
    row.name = data.variables[y].name;
    row.z_size = k;
    std::string zs;
    for (int v : zset) {
      if (!zs.empty()) zs += '+';
      zs += data.variables[v].name;
    }
    row.z_set = zs;
    try {
      CiResult r = assoc(data, target, y, zset, alpha);
      row.g2 = r.g2;
      row.dof = r.dof;
      row.p_value = r.p_value;
      row.quantile = chi2_quantile(alpha, static_cast<double>(r.dof));
      row.eemi_value = eemi(data, target, y, zset);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Capacity) throw;
      break;  // conditioning set outgrew the cell cap
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace mcme
