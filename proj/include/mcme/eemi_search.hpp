#pragma once
#include <vector>

#include "mcme/dataset.hpp"
#include "mcme/citm_search.hpp"

namespace mcme {

struct EemiParams {
  int layers = 1;      // selection-iteration budget (every iteration counts)
  int memory = 1;      // 0 means all selections are unconditional
  double alpha = 0.55; // acceptance threshold on the screening value
};

// Complementary screening layer. Each iteration: erase the conditioning set
// when it has reached capacity, pick the candidate maximizing
// eemi(target, v | conditioning set) (ties by lowest index), accept it when
// the value exceeds alpha, stop otherwise. Accepted nodes join both the
// conditioning set and the result.
CpcResult eemi_search(const Dataset& data, int target,
                      const std::vector<int>& candidates,
                      const EemiParams& params);

}  // namespace mcme
