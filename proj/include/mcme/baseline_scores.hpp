#pragma once
#include <cstdint>
#include <vector>

#include "mcme/bn_model.hpp"
#include "mcme/dataset.hpp"

namespace mcme {

struct ScoreValue {
  double total = 0.0;
  std::vector<double> per_node;  // family scores; total is their sum
};

// Family form: per-node entry -N * H(X_i | pa(X_i)); natural log.
ScoreValue lld_score(const Dataset& data, const Dag& dag);
// LLD - (ln N / 2) * sum_i (r_i - 1) q_i.
ScoreValue bic_score(const Dataset& data, const Dag& dag);

double family_bic(const Dataset& data, int child,
                  const std::vector<int>& parents);

// Greedy best-first over add/delete/reverse from the empty graph until no
// move strictly improves BIC. Moves enumerated lexicographically over
// ordered pairs; the first move at an equal best gain wins, making the
// search fully deterministic. `seed` is accepted for interface stability but
// unused (nothing is randomized).
Dag hill_climb(const Dataset& data, int max_iters = 500, uint64_t seed = 0);

}  // namespace mcme
