#include "mcme/mcme_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <map>
#include <thread>

#include "mcme/errors.hpp"

namespace mcme {

std::vector<int> mcme_cpc(const Dataset& data, int target,
                          const std::vector<int>& candidates,
                          const McmeConfig& cfg, CpcResult* citm_out,
                          CpcResult* eemi_out) {
  CpcResult ci = citm(data, target, candidates, cfg.citm);
  CpcResult screen = eemi_search(data, target, ci.residual, cfg.eemi);
  std::vector<int> out = ci.cpc;
  out.insert(out.end(), screen.cpc.begin(), screen.cpc.end());
  if (citm_out) *citm_out = std::move(ci);
  if (eemi_out) *eemi_out = std::move(screen);
  return out;
}

Skeleton build_skeleton(const Dataset& data, const McmeConfig& cfg, int jobs,
                        std::vector<TargetTrace>* traces) {
  int n = data.n_vars();
  if (n < 2)
    throw Error(ErrorKind::Argument,
                "build_skeleton: need at least 2 variables");
  if (cfg.lambda_hat <= 0.0 || cfg.lambda_hat >= 1.0)
    std::cerr << "warning: lambda_hat " << cfg.lambda_hat
              << " outside (0,1)\n";

  std::vector<std::vector<int>> proposed(n);
  std::vector<std::vector<int>> via_citm(n);
  std::vector<TargetTrace> local(n);

  auto run_target = [&](int t) {
    std::vector<int> cand;
    cand.reserve(n - 1);
    for (int v = 0; v < n; ++v)
      if (v != t) cand.push_back(v);
    CpcResult ci, screen;
    proposed[t] = mcme_cpc(data, t, cand, cfg, &ci, &screen);
    via_citm[t] = ci.cpc;
    local[t] = {t, std::move(ci.trace), std::move(screen.trace)};
  };

  if (jobs <= 1) {
    for (int t = 0; t < n; ++t) run_target(t);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (int t = next.fetch_add(1); t < n; t = next.fetch_add(1))
        run_target(t);
    };
    std::vector<std::thread> pool;
    int k = std::min(jobs, n);
    pool.reserve(k);
    for (int i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // deterministic merge, independent of worker scheduling
  std::map<std::pair<int, int>, EdgeProvenance> edges;
  for (int t = 0; t < n; ++t) {
    for (int v : proposed[t]) {
      bool from_citm =
          std::find(via_citm[t].begin(), via_citm[t].end(), v) !=
          via_citm[t].end();
      std::pair<int, int> key{std::min(t, v), std::max(t, v)};
      EdgeProvenance& prov = edges[key];
      bool target_is_lo = (t == key.first);
      if (target_is_lo) {
        prov.citm_lo |= from_citm;
        prov.eemi_lo |= !from_citm;
      } else {
        prov.citm_hi |= from_citm;
        prov.eemi_hi |= !from_citm;
      }
    }
  }

  Skeleton sk;
  sk.n_nodes = n;
  for (const auto& [edge, prov] : edges) {
    sk.edges.push_back(edge);
    sk.provenance.push_back(prov);
  }
  if (traces) *traces = std::move(local);
  return sk;
}

}  // namespace mcme
