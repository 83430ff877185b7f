#include "mcme/baseline_scores.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "mcme/errors.hpp"
#include "mcme/info_theory.hpp"

namespace mcme {

namespace {

// -N * H(child | parents); contingency construction enforces the cell cap,
// rejecting absurd parent sets.
double family_lld(const Dataset& data, int child,
                  const std::vector<int>& parents) {
  double n = static_cast<double>(data.n_samples());
  return -n * conditional_entropy(data, child, parents);
}

double family_penalty(const Dataset& data, int child,
                      const std::vector<int>& parents) {
  double n = static_cast<double>(data.n_samples());
  double q = 1.0;
  for (int p : parents) q *= data.cardinality(p);
  return 0.5 * std::log(n) * (data.cardinality(child) - 1) * q;
}

}  // namespace

double family_bic(const Dataset& data, int child,
                  const std::vector<int>& parents) {
  return family_lld(data, child, parents) - family_penalty(data, child, parents);
}

ScoreValue lld_score(const Dataset& data, const Dag& dag) {
  if (dag.n_nodes != data.n_vars())
    throw Error(ErrorKind::Argument, "lld_score: node count mismatch");
  ScoreValue s;
  for (int i = 0; i < dag.n_nodes; ++i) {
    s.per_node.push_back(family_lld(data, i, dag.parents[i]));
    s.total += s.per_node.back();
  }
  return s;
}

ScoreValue bic_score(const Dataset& data, const Dag& dag) {
  if (dag.n_nodes != data.n_vars())
    throw Error(ErrorKind::Argument, "bic_score: node count mismatch");
  ScoreValue s;
  for (int i = 0; i < dag.n_nodes; ++i) {
    s.per_node.push_back(family_bic(data, i, dag.parents[i]));
    s.total += s.per_node.back();
  }
  return s;
}

namespace {

bool path_excluding(const std::vector<std::set<int>>& children, int src,
                    int dst, int ex_from, int ex_to) {
  std::vector<int> stack{src};
  std::vector<bool> seen(children.size(), false);
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (u == dst) return true;
    for (int w : children[u]) {
      if (u == ex_from && w == ex_to) continue;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

Dag hill_climb(const Dataset& data, int max_iters, uint64_t /*seed*/) {
  int n = data.n_vars();
  std::vector<std::set<int>> pa(n);
  std::map<std::pair<int, std::vector<int>>, double> cache;

  auto fam = [&](int i, const std::set<int>& ps) {
    std::vector<int> key(ps.begin(), ps.end());
    auto it = cache.find({i, key});
    if (it != cache.end()) return it->second;
    double v = family_bic(data, i, key);
    cache.insert({{i, key}, v});
    return v;
  };

  struct Move {
    double delta;
    int kind;  // 0 add, 1 delete, 2 reverse
    int a, b;
  };

  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<std::set<int>> children(n);
    for (int c = 0; c < n; ++c)
      for (int p : pa[c]) children[p].insert(c);

    bool have = false;
    Move best{0.0, 0, -1, -1};
    // lexicographic pair enumeration; the first move at an equal best gain
    // wins, so ties resolve by declaration order
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        try {
          if (pa[b].count(a)) {
            std::set<int> without = pa[b];
            without.erase(a);
            double d = fam(b, without) - fam(b, pa[b]);
            if (!have || d > best.delta + 1e-12) {
              have = true;
              best = {d, 1, a, b};
            }
            // reverse a->b: legal unless another a..b path exists
            if (!path_excluding(children, a, b, a, b)) {
              std::set<int> with_b = pa[a];
              with_b.insert(b);
              double d2 = (fam(b, without) - fam(b, pa[b])) +
                          (fam(a, with_b) - fam(a, pa[a]));
              if (!have || d2 > best.delta + 1e-12) {
                have = true;
                best = {d2, 2, a, b};
              }
            }
          } else {
            if (pa[a].count(b)) continue;
            if (path_excluding(children, b, a, -1, -1)) continue;  // cycle
            std::set<int> with_a = pa[b];
            with_a.insert(a);
            double d = fam(b, with_a) - fam(b, pa[b]);
            if (!have || d > best.delta + 1e-12) {
              have = true;
              best = {d, 0, a, b};
            }
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Capacity) throw;
          // conditioning table too rich: the move is unscorable, skip it
        }
      }
    }
    if (!have || best.delta <= 1e-9) break;
    if (best.kind == 0) {
      pa[best.b].insert(best.a);
    } else if (best.kind == 1) {
      pa[best.b].erase(best.a);
    } else {
      pa[best.b].erase(best.a);
      pa[best.a].insert(best.b);
    }
  }

  Dag dag;
  dag.n_nodes = n;
  dag.parents.assign(n, {});
  for (int c = 0; c < n; ++c)
    dag.parents[c].assign(pa[c].begin(), pa[c].end());
  return dag;
}

}  // namespace mcme
