#pragma once
#include <vector>

#include "mcme/dataset.hpp"
#include "mcme/trace.hpp"

namespace mcme {

struct CitmParams {
  int layers = 1;       // memory-erase rounds; 0 disables the layer
  int memory = 1;       // conditioning-set capacity, typically 1 or 2
  double alpha = 0.01;  // CI significance
};

struct CpcResult {
  std::vector<int> cpc;       // accumulated, in acceptance order
  std::vector<int> residual;  // candidates never accepted
  std::vector<TraceEvent> trace;
};

// Per-round grow/shrink CI search with memory erasing. Grow: repeatedly add
// v = argmin_p assoc(target, v | round set), ties by lowest index, while
// p < alpha and the round set is below capacity. Shrink: repeatedly remove
// x = argmax_p assoc(target, x | round set - {x}) while p > alpha. Round set
// then merges into the result, accepted nodes leave the candidate pool, and
// the memory is erased. Stops early on an empty round. Ordering uses log p,
// so saturated tests (p underflows to 0) still rank correctly.
CpcResult citm(const Dataset& data, int target,
               const std::vector<int>& candidates, const CitmParams& params);

}  // namespace mcme
