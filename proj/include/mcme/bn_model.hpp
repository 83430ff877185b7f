#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mcme/dataset.hpp"

namespace mcme {

struct Dag {
  int n_nodes = 0;
  std::vector<std::vector<int>> parents;  // per node, ordered, no duplicates

  std::vector<std::pair<int, int>> edges() const;  // (parent, child)
};

bool is_acyclic(const Dag& dag);
// Kahn order, ties by lowest node index; throws Structure on a cycle.
std::vector<int> topo_order(const Dag& dag);

struct Cpt {
  int child = 0;
  int parent_config_count = 0;          // q_i, row-major over parent list
  int child_cardinality = 0;            // r_i
  std::vector<double> probs;            // q_i * r_i, each row sums to 1
  double at(int row, int k) const { return probs[row * child_cardinality + k]; }
};

struct BayesNet {
  std::string name;
  Dag dag;
  std::vector<VariableMeta> variables;
  std::vector<Cpt> cpts;

  int n_nodes() const { return dag.n_nodes; }
  int index_of(const std::string& var) const;  // -1 when absent
};

// Line-oriented interchange text: `network`, `variable {states ...}`, and
// `probability` blocks (root `table` rows or rows keyed by parent states).
// Errors carry line/column; cycles raise Structure, bad rows Validation,
// unknown names Reference.
BayesNet parse_network(const std::string& path);
BayesNet parse_network_text(const std::string& text, const std::string& origin);
std::string serialize_network(const BayesNet& net);

// Ancestral sampling in topological order; deterministic in seed, and draw
// (sample i, node j) is independent of evaluation order (counter RNG).
Dataset forward_sample(const BayesNet& net, int n, uint64_t seed);

double joint_probability(const BayesNet& net, const std::vector<int>& assignment);

// Recode a loaded dataset against the net's variable set: columns matched by
// name, codes remapped to the net's state order, cardinalities overridden so
// unobserved states keep their slot. Unknown labels raise Reference.
void apply_reference_meta(Dataset& data, const BayesNet& net);

}  // namespace mcme
