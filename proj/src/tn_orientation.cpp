#include "mcme/tn_orientation.hpp"

#include <algorithm>
#include <cmath>

#include "mcme/errors.hpp"
#include "mcme/info_theory.hpp"

namespace mcme {

TnScore tn_score(const Dataset& data, int child, int parent,
                 double lambda_hat) {
  if (child == parent)
    throw Error(ErrorKind::Argument, "tn_score: child == parent");
  TnScore s;
  s.child = child;
  s.parent = parent;
  if (data.cardinality(child) < 2) {
    s.degenerate = true;  // log base |D(child)| undefined for constants
    return s;
  }
  double n = static_cast<double>(data.n_samples());
  double h_c_given_p = conditional_entropy(data, child, {parent});
  double hp = entropy(data, parent);
  double hj = joint_entropy(data, {child, parent});
  double i = mutual_information(data, child, parent);
  double lambda =
      lambda_hat * std::log(n) / std::log(static_cast<double>(data.cardinality(child)));
  s.lld_term = -n * h_c_given_p;
  s.penalty_term = hj <= 0.0 ? 0.0 : -lambda * (i / hj) * hp;
  s.value = s.lld_term + s.penalty_term;
  return s;
}

std::optional<OrientedEdge> orient_edge(const Dataset& data, int x, int y,
                                        double lambda_hat) {
  TnScore gx = tn_score(data, x, y, lambda_hat);  // x as child, y as parent
  TnScore gy = tn_score(data, y, x, lambda_hat);
  if (gx.degenerate || gy.degenerate) return std::nullopt;
  OrientedEdge e;
  if (gx.value > gy.value) {
    e.parent = y;
    e.child = x;
    e.margin = gx.value - gy.value;
  } else if (gy.value > gx.value) {
    e.parent = x;
    e.child = y;
    e.margin = gy.value - gx.value;
  } else {
    e.parent = std::min(x, y);
    e.child = std::max(x, y);
    e.margin = 0.0;
    e.tie = true;
  }
  return e;
}

namespace {

bool has_path(const std::vector<std::vector<int>>& children, int a, int b) {
  std::vector<int> stack{a};
  std::vector<bool> seen(children.size(), false);
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (u == b) return true;
    for (int w : children[u])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  return false;
}

}  // namespace

DagResult generate_dag(const Dataset& data, const Skeleton& skeleton,
                       double lambda_hat) {
  DagResult out;
  int n = skeleton.n_nodes;
  out.dag.n_nodes = n;
  out.dag.parents.assign(n, {});

  std::vector<std::pair<int, int>> pairs = skeleton.edges;
  std::sort(pairs.begin(), pairs.end());
  std::vector<OrientedEdge> decided;
  for (const auto& [a, b] : pairs) {
    auto e = orient_edge(data, a, b, lambda_hat);
    if (!e) {
      out.dropped_edges.emplace_back(a, b);
      continue;
    }
    decided.push_back(*e);
  }
  std::stable_sort(decided.begin(), decided.end(),
                   [](const OrientedEdge& l, const OrientedEdge& r) {
                     if (l.margin != r.margin) return l.margin > r.margin;
                     if (l.parent != r.parent) return l.parent < r.parent;
                     return l.child < r.child;
                   });

  std::vector<std::vector<int>> children(n);
  for (const auto& e : decided) {
    if (!has_path(children, e.child, e.parent)) {
      children[e.parent].push_back(e.child);
      out.dag.parents[e.child].push_back(e.parent);
      out.decided.push_back(e);
    } else if (!has_path(children, e.parent, e.child)) {
      children[e.child].push_back(e.parent);
      out.dag.parents[e.parent].push_back(e.child);
      OrientedEdge rev = e;
      std::swap(rev.parent, rev.child);
      out.decided.push_back(rev);
      out.reversed_edges.emplace_back(e.parent, e.child);
    } else {
      out.dropped_edges.emplace_back(std::min(e.parent, e.child),
                                     std::max(e.parent, e.child));
    }
  }
  return out;
}

}  // namespace mcme
