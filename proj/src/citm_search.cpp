#include "mcme/citm_search.hpp"

#include <algorithm>
#include <iostream>
#include <utility>

#include "mcme/ci_test.hpp"
#include "mcme/errors.hpp"

namespace mcme {

CpcResult citm(const Dataset& data, int target,
               const std::vector<int>& candidates, const CitmParams& params) {
  for (int v : candidates)
    if (v == target)
      throw Error(ErrorKind::Argument, "citm: target among candidates");
  if (params.memory < 1)
    throw Error(ErrorKind::Argument, "citm: memory must be positive");
  if (params.memory > 2)
    std::cerr << "warning: CI-layer memory " << params.memory
              << " above the typical bound of 2\n";

  CpcResult out;
  std::vector<int> cand = candidates;
  for (int rnd = 0; rnd < params.layers; ++rnd) {
    std::vector<int> cpc;
    // grow: strongest remaining candidate while dependent and under capacity
    while (static_cast<int>(cpc.size()) < params.memory) {
      bool have = false;
      std::pair<double, int> best_key{0.0, 0};
      double best_p = 1.0;
      for (int v : cand) {
        if (std::find(cpc.begin(), cpc.end(), v) != cpc.end()) continue;
        CiResult r;
        try {
          r = assoc(data, target, v, cpc, params.alpha);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Capacity) throw;
          out.trace.push_back(
              {TraceEvent::Kind::Skip, rnd, v, 1.0, 0.0});
          continue;
        }
        std::pair<double, int> key{r.log_p, v};
        if (!have || key < best_key) {
          have = true;
          best_key = key;
          best_p = r.p_value;
        }
      }
      if (!have) break;
      if (best_p < params.alpha) {
        cpc.push_back(best_key.second);
        out.trace.push_back(
            {TraceEvent::Kind::Add, rnd, best_key.second, best_p, 0.0});
      } else {
        break;
      }
    }
    // shrink: weakest member while independent given the rest
    while (!cpc.empty()) {
      bool have = false;
      std::pair<double, int> worst_key{0.0, 0};
      double worst_p = 0.0;
      for (int x : cpc) {
        std::vector<int> rest;
        for (int v : cpc)
          if (v != x) rest.push_back(v);
        CiResult r;
        try {
          r = assoc(data, target, x, rest, params.alpha);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Capacity) throw;
          out.trace.push_back({TraceEvent::Kind::Skip, rnd, x, 0.0, 0.0});
          continue;
        }
        std::pair<double, int> key{-r.log_p, x};
        if (!have || key < worst_key) {
          have = true;
          worst_key = key;
          worst_p = r.p_value;
        }
      }
      if (!have) break;
      if (worst_p > params.alpha) {
        cpc.erase(std::find(cpc.begin(), cpc.end(), worst_key.second));
        out.trace.push_back(
            {TraceEvent::Kind::Remove, rnd, worst_key.second, worst_p, 0.0});
      } else {
        break;
      }
    }
    if (cpc.empty()) break;  // the round contributed nothing
    for (int v : cpc) {
      out.cpc.push_back(v);
      cand.erase(std::find(cand.begin(), cand.end(), v));
    }
    out.trace.push_back({TraceEvent::Kind::Erase, rnd, -1, 0.0, 0.0});
  }
  out.residual = std::move(cand);
  return out;
}

}  // namespace mcme
