#pragma once
#include <utility>
#include <vector>

#include "mcme/citm_search.hpp"
#include "mcme/dataset.hpp"
#include "mcme/eemi_search.hpp"

namespace mcme {

struct McmeConfig {
  CitmParams citm;
  EemiParams eemi;
  double lambda_hat = 0.3;  // orientation penalty weight, expected in (0,1)
};

// Which side(s) proposed an edge and through which layer. lo/hi refer to the
// endpoint with the smaller/larger index acting as the proposing target.
struct EdgeProvenance {
  bool citm_lo = false;
  bool eemi_lo = false;
  bool citm_hi = false;
  bool eemi_hi = false;
};

struct Skeleton {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> edges;       // canonical (low, high), sorted
  std::vector<EdgeProvenance> provenance;       // parallel to edges
};

struct TargetTrace {
  int target = -1;
  std::vector<TraceEvent> citm;
  std::vector<TraceEvent> eemi;
};

// CI layer first, then the screening layer over its residual; the union is
// disjoint by construction.
std::vector<int> mcme_cpc(const Dataset& data, int target,
                          const std::vector<int>& candidates,
                          const McmeConfig& cfg,
                          CpcResult* citm_out = nullptr,
                          CpcResult* eemi_out = nullptr);

// Runs mcme_cpc for every target against all other variables; edge {X,Y}
// included iff either endpoint proposes the other. Targets fan out across
// `jobs` workers; the merge is order-independent of scheduling.
Skeleton build_skeleton(const Dataset& data, const McmeConfig& cfg,
                        int jobs = 1,
                        std::vector<TargetTrace>* traces = nullptr);

}  // namespace mcme
