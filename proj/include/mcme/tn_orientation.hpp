#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "mcme/bn_model.hpp"
#include "mcme/dataset.hpp"
#include "mcme/mcme_pipeline.hpp"

namespace mcme {

struct TnScore {
  double value = 0.0;      // lld_term + penalty_term
  double lld_term = 0.0;   // -N * H(child | parent)
  double penalty_term = 0.0;
  int child = -1;
  int parent = -1;
  bool degenerate = false;  // constant child: log base |D(child)| undefined
};

// g(child, parent) = -N H(child|parent) - lambda (I/H_joint) H(parent) with
// lambda = lambda_hat ln N / ln |D(child)|; H_joint = 0 drops the penalty.
TnScore tn_score(const Dataset& data, int child, int parent, double lambda_hat);

struct OrientedEdge {
  int parent = -1;
  int child = -1;
  double margin = 0.0;  // |score difference| between the two directions
  bool tie = false;     // margin 0: lower index taken as parent
};

// Antisymmetric in (x, y); nullopt when either direction is degenerate.
std::optional<OrientedEdge> orient_edge(const Dataset& data, int x, int y,
                                        double lambda_hat);

struct DagResult {
  Dag dag;
  std::vector<OrientedEdge> decided;                 // insertion order
  std::vector<std::pair<int, int>> reversed_edges;   // flipped to stay acyclic
  std::vector<std::pair<int, int>> dropped_edges;    // both directions cyclic,
                                                     // or degenerate scores
};

// Orient every skeleton edge, insert in descending-margin order, reverse an
// insertion that would close a cycle, drop it when both directions do.
// Output is always acyclic.
DagResult generate_dag(const Dataset& data, const Skeleton& skeleton,
                       double lambda_hat);

}  // namespace mcme
