#include "mcme/eemi_search.hpp"

#include <algorithm>
#include <utility>

#include "mcme/errors.hpp"
#include "mcme/info_theory.hpp"

namespace mcme {

CpcResult eemi_search(const Dataset& data, int target,
                      const std::vector<int>& candidates,
                      const EemiParams& params) {
  for (int v : candidates)
    if (v == target)
      throw Error(ErrorKind::Argument, "eemi_search: target among candidates");
  if (params.memory < 0)
    throw Error(ErrorKind::Argument, "eemi_search: memory must be >= 0");

  CpcResult out;
  std::vector<int> cand = candidates;
  std::vector<int> cpc;
  int t = 0;
  while (t < params.layers) {
    ++t;
    // erase at capacity before picking; memory 0 keeps every pick
    // unconditional
    if (static_cast<int>(cpc.size()) >= params.memory && !cpc.empty()) {
      cpc.clear();
      out.trace.push_back({TraceEvent::Kind::Erase, t, -1, 0.0, 0.0});
    }
    bool have = false;
    std::pair<double, int> best_key{0.0, 0};
    double best_val = 0.0;
    for (int v : cand) {
      double val;
      try {
        val = eemi(data, target, v, cpc);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Capacity) throw;
        out.trace.push_back({TraceEvent::Kind::Skip, t, v, 0.0, 0.0});
        continue;
      }
      std::pair<double, int> key{-val, v};
      if (!have || key < best_key) {
        have = true;
        best_key = key;
        best_val = val;
      }
    }
    if (!have) break;
    if (best_val > params.alpha) {
      int v = best_key.second;
      cpc.push_back(v);
      cand.erase(std::find(cand.begin(), cand.end(), v));
      out.cpc.push_back(v);
      out.trace.push_back({TraceEvent::Kind::Add, t, v, 0.0, best_val});
    } else {
      out.trace.push_back(
          {TraceEvent::Kind::Stop, t, best_key.second, 0.0, best_val});
      break;
    }
  }
  out.residual = std::move(cand);
  return out;
}

}  // namespace mcme
