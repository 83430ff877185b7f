// Command-line surface for the structure-learning toolkit.
//
// Subcommands: sample, learn, score, evaluate, bench, explain.
// Exit codes: 0 success, 1 data/run error (diagnostic on stderr), 2 usage.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcme/baseline_scores.hpp"
#include "mcme/bn_model.hpp"
#include "mcme/ci_test.hpp"
#include "mcme/dataset.hpp"
#include "mcme/errors.hpp"
#include "mcme/evaluation.hpp"
#include "mcme/info_theory.hpp"
#include "mcme/mcme_pipeline.hpp"
#include "mcme/tn_orientation.hpp"

namespace {

using nlohmann::ordered_json;

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw mcme::Error(mcme::ErrorKind::Io, "cannot open for writing: " + path);
  out << text;
  if (!out)
    throw mcme::Error(mcme::ErrorKind::Io, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mcme::Error(mcme::ErrorKind::Io, "cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

ordered_json dag_to_json(const mcme::Dag& dag,
                         const std::vector<std::string>& names) {
  ordered_json doc;
  doc["names"] = names;
  ordered_json parents = ordered_json::object();
  for (int i = 0; i < dag.n_nodes; ++i) {
    ordered_json list = ordered_json::array();
    for (int p : dag.parents[i]) list.push_back(names[p]);
    parents[names[i]] = std::move(list);
  }
  doc["parents"] = std::move(parents);
  ordered_json edges = ordered_json::array();
  for (const auto& [p, c] : dag.edges())
    edges.push_back(ordered_json::array({names[p], names[c]}));
  doc["edges"] = std::move(edges);
  return doc;
}

struct NamedDag {
  mcme::Dag dag;
  std::vector<std::string> names;
};

NamedDag dag_from_json_text(const std::string& text, const std::string& origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw mcme::Error(mcme::ErrorKind::Format, origin + ": " + e.what());
  }
  NamedDag out;
  try {
    out.names = doc.at("names").get<std::vector<std::string>>();
    out.dag.n_nodes = static_cast<int>(out.names.size());
    out.dag.parents.assign(out.names.size(), {});
    const auto& parents = doc.at("parents");
    for (size_t i = 0; i < out.names.size(); ++i) {
      auto it = parents.find(out.names[i]);
      if (it == parents.end()) continue;
      for (const auto& pname : *it) {
        std::string p = pname.get<std::string>();
        auto pos = std::find(out.names.begin(), out.names.end(), p);
        if (pos == out.names.end())
          throw mcme::Error(mcme::ErrorKind::Reference,
                            origin + ": unknown parent name: " + p);
        out.dag.parents[i].push_back(
            static_cast<int>(pos - out.names.begin()));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw mcme::Error(mcme::ErrorKind::Format, origin + ": " + e.what());
  }
  if (!mcme::is_acyclic(out.dag))
    throw mcme::Error(mcme::ErrorKind::Structure, origin + ": graph is cyclic");
  return out;
}

// Load a graph from either interchange form: a network file (with CPTs) or
// the graph JSON this tool writes.
NamedDag load_named_dag(const std::string& path) {
  std::string text = read_text_file(path);
  size_t pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && (text[pos] == '{')) {
    return dag_from_json_text(text, path);
  }
  mcme::BayesNet net = mcme::parse_network_text(text, path);
  NamedDag out;
  out.dag = net.dag;
  for (const auto& v : net.variables) out.names.push_back(v.name);
  return out;
}

// Remap a named graph onto the variable order of a dataset.
mcme::Dag align_dag_to_data(const NamedDag& named, const mcme::Dataset& data) {
  if (named.dag.n_nodes != data.n_vars())
    throw mcme::Error(mcme::ErrorKind::Argument,
                      "graph and dataset have different variable counts");
  std::vector<int> to_data(named.names.size());
  for (size_t i = 0; i < named.names.size(); ++i) {
    int idx = data.index_of(named.names[i]);
    if (idx < 0)
      throw mcme::Error(mcme::ErrorKind::Reference,
                        "graph variable not in dataset: " + named.names[i]);
    to_data[i] = idx;
  }
  mcme::Dag out;
  out.n_nodes = data.n_vars();
  out.parents.assign(out.n_nodes, {});
  for (int i = 0; i < named.dag.n_nodes; ++i) {
    for (int p : named.dag.parents[i])
      out.parents[to_data[i]].push_back(to_data[p]);
    std::sort(out.parents[to_data[i]].begin(), out.parents[to_data[i]].end());
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

struct LearnFlags {
  std::string data_path;
  std::string net_path;
  std::string out_dir = ".";
  std::string trace_path;
  int ct_layer = 1;
  int ct_memory = 1;
  double ct_alpha = 0.01;
  int ee_layer = 1;
  int ee_memory = 1;
  double ee_alpha = 0.55;
  double lambda_hat = 0.3;
  int jobs = 1;
};

void add_config_flags(CLI::App* sub, LearnFlags& f) {
  sub->add_option("--ct-layer", f.ct_layer,
                  "CI-layer memory-erase rounds (0 disables)")
      ->capture_default_str();
  sub->add_option("--ct-memory", f.ct_memory,
                  "CI-layer conditioning-set capacity")
      ->capture_default_str();
  sub->add_option("--ct-alpha", f.ct_alpha, "CI significance level")
      ->capture_default_str();
  sub->add_option("--ee-layer", f.ee_layer,
                  "screening-layer iteration budget (0 disables)")
      ->capture_default_str();
  sub->add_option("--ee-memory", f.ee_memory,
                  "screening conditioning capacity (0 = unconditional)")
      ->capture_default_str();
  sub->add_option("--ee-alpha", f.ee_alpha, "screening acceptance threshold")
      ->capture_default_str();
  sub->add_option("--lambda", f.lambda_hat,
                  "orientation penalty weight in (0,1)")
      ->capture_default_str();
  sub->add_option("--jobs", f.jobs, "worker pool size")
      ->envname("MCME_JOBS")
      ->capture_default_str();
}

mcme::McmeConfig to_config(const LearnFlags& f) {
  mcme::McmeConfig cfg;
  cfg.citm.layers = f.ct_layer;
  cfg.citm.memory = f.ct_memory;
  cfg.citm.alpha = f.ct_alpha;
  cfg.eemi.layers = f.ee_layer;
  cfg.eemi.memory = f.ee_memory;
  cfg.eemi.alpha = f.ee_alpha;
  cfg.lambda_hat = f.lambda_hat;
  return cfg;
}

ordered_json config_to_json(const LearnFlags& f) {
  return {{"ct_layer", f.ct_layer},   {"ct_memory", f.ct_memory},
          {"ct_alpha", f.ct_alpha},   {"ee_layer", f.ee_layer},
          {"ee_memory", f.ee_memory}, {"ee_alpha", f.ee_alpha},
          {"lambda", f.lambda_hat},   {"jobs", f.jobs}};
}

int cmd_sample(const std::string& net_path, int n, uint64_t seed,
               const std::string& out_path) {
  mcme::BayesNet net = mcme::parse_network(net_path);
  mcme::Dataset data = mcme::forward_sample(net, n, seed);
  mcme::write_csv(data, out_path);
  return 0;
}

int cmd_learn(const LearnFlags& f) {
  mcme::Dataset data = mcme::load_csv(f.data_path);
  if (!f.net_path.empty()) {
    mcme::BayesNet net = mcme::parse_network(f.net_path);
    mcme::apply_reference_meta(data, net);
  }
  mcme::McmeConfig cfg = to_config(f);

  std::vector<mcme::TargetTrace> traces;
  std::vector<mcme::TargetTrace>* traces_ptr =
      f.trace_path.empty() ? nullptr : &traces;

  auto t0 = std::chrono::steady_clock::now();
  mcme::Skeleton sk = mcme::build_skeleton(data, cfg, f.jobs, traces_ptr);
  mcme::DagResult res = mcme::generate_dag(data, sk, cfg.lambda_hat);
  auto t1 = std::chrono::steady_clock::now();
  double wall = std::chrono::duration<double>(t1 - t0).count();

  std::filesystem::create_directories(f.out_dir);
  auto path_in = [&](const char* name) {
    return (std::filesystem::path(f.out_dir) / name).string();
  };
  std::vector<std::string> names;
  for (const auto& v : data.variables) names.push_back(v.name);

  write_text_file(path_in("dag.json"),
                  dag_to_json(res.dag, names).dump(2) + "\n");

  auto prov_name = [](bool via_citm, bool via_eemi) {
    return via_citm ? "citm" : (via_eemi ? "eemi" : "none");
  };
  std::ostringstream sk_text;
  sk_text << "# skeleton: " << sk.edges.size() << " edges over "
          << data.n_vars() << " variables\n";
  for (size_t i = 0; i < sk.edges.size(); ++i) {
    const auto& [a, b] = sk.edges[i];
    const auto& pv = sk.provenance[i];
    sk_text << names[a] << " -- " << names[b] << "\tlo="
            << prov_name(pv.citm_lo, pv.eemi_lo)
            << " hi=" << prov_name(pv.citm_hi, pv.eemi_hi) << "\n";
  }
  write_text_file(path_in("skeleton.txt"), sk_text.str());

  ordered_json report;
  report["command"] = "learn";
  report["data"] = {{"path", f.data_path},
                    {"variables", data.n_vars()},
                    {"samples", data.n_samples()}};
  report["config"] = config_to_json(f);
  ordered_json sk_edges = ordered_json::array();
  for (const auto& [a, b] : sk.edges)
    sk_edges.push_back(ordered_json::array({names[a], names[b]}));
  report["skeleton"] = {{"edge_count", sk.edges.size()},
                        {"edges", std::move(sk_edges)}};
  ordered_json dag_edges = ordered_json::array();
  for (const auto& [p, c] : res.dag.edges())
    dag_edges.push_back(ordered_json::array({names[p], names[c]}));
  ordered_json reversed = ordered_json::array();
  for (const auto& [p, c] : res.reversed_edges)
    reversed.push_back(ordered_json::array({names[p], names[c]}));
  ordered_json dropped = ordered_json::array();
  for (const auto& [a, b] : res.dropped_edges)
    dropped.push_back(ordered_json::array({names[a], names[b]}));
  report["dag"] = {{"edge_count", res.dag.edges().size()},
                   {"edges", std::move(dag_edges)},
                   {"reversed", std::move(reversed)},
                   {"dropped", std::move(dropped)}};
  report["meta"] = {{"wall_time_s", wall}};
  write_text_file(path_in("report.json"), report.dump(2) + "\n");

  if (!f.trace_path.empty()) {
    std::ostringstream tr;
    for (const auto& tt : traces) {
      auto dump_phase = [&](const char* phase,
                            const std::vector<mcme::TraceEvent>& events) {
        for (const auto& ev : events) {
          ordered_json line{{"target", names[tt.target]},
                            {"phase", phase},
                            {"kind", mcme::trace_kind_name(ev.kind)},
                            {"round", ev.round}};
          if (ev.var >= 0)
            line["var"] = names[ev.var];
          else
            line["var"] = nullptr;
          line["p"] = ev.p;
          line["value"] = ev.value;
          tr << line.dump() << "\n";
        }
      };
      dump_phase("citm", tt.citm);
      dump_phase("eemi", tt.eemi);
    }
    write_text_file(f.trace_path, tr.str());
  }
  return 0;
}

int cmd_score(const std::string& data_path, const std::string& net_path,
              const std::string& dag_path, const std::string& which,
              const std::string& out_path) {
  mcme::Dataset data = mcme::load_csv(data_path);
  if (!net_path.empty()) {
    mcme::BayesNet net = mcme::parse_network(net_path);
    mcme::apply_reference_meta(data, net);
  }
  NamedDag named = load_named_dag(dag_path);
  mcme::Dag dag = align_dag_to_data(named, data);
  mcme::ScoreValue sv = which == "lld" ? mcme::lld_score(data, dag)
                                       : mcme::bic_score(data, dag);
  ordered_json doc;
  doc["score"] = which;
  doc["total"] = sv.total;
  ordered_json per = ordered_json::object();
  for (int i = 0; i < data.n_vars(); ++i)
    per[data.variables[i].name] = sv.per_node[i];
  doc["per_node"] = std::move(per);
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

int cmd_evaluate(const std::string& learned_path, const std::string& truth_path,
                 const std::string& out_path) {
  NamedDag learned = load_named_dag(learned_path);
  NamedDag truth = load_named_dag(truth_path);
  if (learned.names.size() != truth.names.size())
    throw mcme::Error(mcme::ErrorKind::Argument,
                      "learned and truth graphs disagree on variable count");
  // Remap truth onto the learned graph's name order.
  std::vector<int> to_learned(truth.names.size());
  for (size_t i = 0; i < truth.names.size(); ++i) {
    auto pos = std::find(learned.names.begin(), learned.names.end(),
                         truth.names[i]);
    if (pos == learned.names.end())
      throw mcme::Error(mcme::ErrorKind::Reference,
                        "truth variable not in learned graph: " +
                            truth.names[i]);
    to_learned[i] = static_cast<int>(pos - learned.names.begin());
  }
  mcme::Dag truth_dag;
  truth_dag.n_nodes = truth.dag.n_nodes;
  truth_dag.parents.assign(truth.dag.n_nodes, {});
  for (int i = 0; i < truth.dag.n_nodes; ++i) {
    for (int p : truth.dag.parents[i])
      truth_dag.parents[to_learned[i]].push_back(to_learned[p]);
    std::sort(truth_dag.parents[to_learned[i]].begin(),
              truth_dag.parents[to_learned[i]].end());
  }
  mcme::StructureDiff d = mcme::structure_diff(learned.dag, truth_dag);
  ordered_json doc{{"a_g", d.a_g},
                   {"d_g", d.d_g},
                   {"h_g", d.h_g},
                   {"trueadd_pct", d.trueadd_pct},
                   {"falseadd_pct", d.falseadd_pct}};
  emit(doc.dump(2) + "\n", out_path);
  return 0;
}

int cmd_bench(const std::string& nets_arg, const LearnFlags& f, int n,
              const std::string& seeds_arg, const std::string& algs_arg,
              const std::string& format, const std::string& out_path) {
  std::vector<std::string> nets = split_commas(nets_arg);
  std::vector<uint64_t> seeds;
  for (const auto& s : split_commas(seeds_arg)) {
    try {
      seeds.push_back(std::stoull(s));
    } catch (const std::exception&) {
      throw mcme::Error(mcme::ErrorKind::Argument, "bad seed: " + s);
    }
  }
  std::vector<std::string> algorithms = split_commas(algs_arg);
  mcme::McmeConfig cfg = to_config(f);
  std::vector<mcme::BenchRun> runs =
      mcme::run_benchmark(nets, cfg, algorithms, n, seeds, f.jobs);
  std::string text;
  if (format == "json")
    text = mcme::bench_report_json(runs, cfg);
  else if (format == "csv")
    text = mcme::bench_report_csv(runs);
  else
    text = mcme::bench_report_table(runs);
  emit(text, out_path);
  for (const auto& r : runs)
    if (r.failed) {
      std::cerr << "error: " << r.network << " seed " << r.seed << " ("
                << r.algorithm << "): " << r.error << "\n";
      return 1;
    }
  return 0;
}

int cmd_explain(const std::string& data_path, const std::string& target_name,
                const std::string& pair_name, double alpha, int max_cond,
                const std::string& out_path) {
  mcme::Dataset data = mcme::load_csv(data_path);
  int target = data.index_of(target_name);
  if (target < 0)
    throw mcme::Error(mcme::ErrorKind::Reference,
                      "unknown target variable: " + target_name);
  int pair = -1;
  if (!pair_name.empty()) {
    pair = data.index_of(pair_name);
    if (pair < 0)
      throw mcme::Error(mcme::ErrorKind::Reference,
                        "unknown pair variable: " + pair_name);
  }
  std::vector<mcme::ExplainRow> rows =
      mcme::explain_target(data, target, alpha, max_cond, pair);
  std::ostringstream out;
  out << "kind,name,z_size,z_set,g2,dof,p_value,quantile,eemi\n";
  for (const auto& r : rows) {
    out << r.kind << ',' << r.name << ',' << r.z_size << ',' << r.z_set << ','
        << format_double(r.g2) << ',' << r.dof << ','
        << format_double(r.p_value) << ',' << format_double(r.quantile) << ','
        << format_double(r.eemi_value) << "\n";
  }
  emit(out.str(), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete Bayesian-network structure learning toolkit"};
  app.require_subcommand(1);
  // One config file for the whole tool; keys live under [learn] / [bench]
  // sections. Explicit command-line flags always win over file values.
  app.set_config("--config", "",
                 "key=value defaults in [learn]/[bench] sections; explicit "
                 "flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  // sample
  auto* sample = app.add_subcommand(
      "sample", "Draw a dataset from a reference network by ancestral sampling");
  std::string sm_net, sm_out;
  int sm_n = 1000;
  uint64_t sm_seed = 0;
  sample->add_option("--net", sm_net, "reference network file")->required();
  sample->add_option("--n", sm_n, "sample count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sample->add_option("--seed", sm_seed, "sampling seed")->capture_default_str();
  sample->add_option("--out", sm_out, "output CSV path")->required();

  // learn
  auto* learn = app.add_subcommand(
      "learn", "Learn a directed graph from data (skeleton + orientation)");
  LearnFlags lf;
  learn->add_option("--data", lf.data_path, "input CSV")->required();
  learn->add_option("--net", lf.net_path,
                    "reference network supplying variable metadata");
  learn->add_option("--out-dir", lf.out_dir,
                    "directory for dag.json, skeleton.txt, report.json")
      ->capture_default_str();
  learn->add_option("--trace", lf.trace_path, "write a JSONL decision trace");
  add_config_flags(learn, lf);
  learn->fallthrough();

  // score
  auto* score = app.add_subcommand("score", "Score a graph against data");
  std::string sc_data, sc_net, sc_dag, sc_out;
  std::string sc_which = "bic";
  score->add_option("--data", sc_data, "input CSV")->required();
  score->add_option("--net", sc_net,
                    "reference network supplying variable metadata");
  score->add_option("--dag", sc_dag, "graph file (JSON or network)")
      ->required();
  score->add_option("--score", sc_which, "score family")
      ->check(CLI::IsMember({"bic", "lld"}))
      ->capture_default_str();
  score->add_option("--out", sc_out, "output path (default stdout)");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Structural difference between a learned and a true graph");
  std::string ev_learned, ev_truth, ev_out;
  evaluate->add_option("--learned", ev_learned, "learned graph JSON")
      ->required();
  evaluate->add_option("--truth", ev_truth, "true graph (JSON or network)")
      ->required();
  evaluate->add_option("--out", ev_out, "output path (default stdout)");

  // bench
  auto* bench = app.add_subcommand(
      "bench", "Sample/learn/score sweep over networks and seeds");
  LearnFlags bf;
  std::string bn_nets, bn_out;
  std::string bn_seeds = "0,1,2,3,4,5,6,7,8,9";
  std::string bn_algs = "mcme,hc";
  std::string bn_format = "table";
  int bn_n = 1000;
  bench->add_option("--nets", bn_nets, "comma-separated network files")
      ->required();
  bench->add_option("--n", bn_n, "sample count per run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--seeds", bn_seeds, "comma-separated seeds")
      ->capture_default_str();
  bench->add_option("--algorithms", bn_algs, "comma-separated: mcme,hc")
      ->capture_default_str();
  bench->add_option("--format", bn_format, "report format")
      ->check(CLI::IsMember({"json", "table", "csv"}))
      ->capture_default_str();
  bench->add_option("--out", bn_out, "output path (default stdout)");
  add_config_flags(bench, bf);
  bench->fallthrough();

  // explain
  auto* explain = app.add_subcommand(
      "explain", "Per-candidate association diagnostics for one variable");
  std::string ex_data, ex_target, ex_pair, ex_out;
  double ex_alpha = 0.01;
  int ex_max_cond = 5;
  explain->add_option("--data", ex_data, "input CSV")->required();
  explain->add_option("--target", ex_target, "target variable name")
      ->required();
  explain->add_option("--pair", ex_pair,
                      "partner variable for the conditioning curve "
                      "(default: strongest candidate)");
  explain->add_option("--alpha", ex_alpha, "significance for quantile column")
      ->capture_default_str();
  explain->add_option("--max-cond", ex_max_cond,
                      "largest conditioning-set size on the curve")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  explain->add_option("--out", ex_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sample->parsed()) return cmd_sample(sm_net, sm_n, sm_seed, sm_out);
    if (learn->parsed()) return cmd_learn(lf);
    if (score->parsed())
      return cmd_score(sc_data, sc_net, sc_dag, sc_which, sc_out);
    if (evaluate->parsed()) return cmd_evaluate(ev_learned, ev_truth, ev_out);
    if (bench->parsed())
      return cmd_bench(bn_nets, bf, bn_n, bn_seeds, bn_algs, bn_format, bn_out);
    if (explain->parsed())
      return cmd_explain(ex_data, ex_target, ex_pair, ex_alpha, ex_max_cond,
                         ex_out);
  } catch (const mcme::Error& e) {
    std::cerr << "error (" << mcme::error_kind_name(e.kind()) << "): "
              << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
