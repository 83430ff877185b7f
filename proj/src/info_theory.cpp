#include "mcme/info_theory.hpp"

#include <algorithm>
#include <cmath>

#include "mcme/errors.hpp"

namespace mcme {

namespace {

double entropy_of_counts(const std::vector<int64_t>& counts, int64_t total) {
  if (total == 0) return 0.0;
  double acc = 0.0;
  for (int64_t c : counts)
    if (c > 0) acc += static_cast<double>(c) * std::log(static_cast<double>(c));
  double n = static_cast<double>(total);
  double h = std::log(n) - acc / n;
  return h < 0.0 ? 0.0 : h;
}

std::vector<int> concat(const std::vector<int>& a, std::initializer_list<int> b) {
  std::vector<int> out = a;
  out.insert(out.end(), b);
  return out;
}

}  // namespace

double joint_entropy(const Dataset& data, const std::vector<int>& vars) {
  if (vars.empty()) return 0.0;
  ContingencyTable t = contingency(data, vars);
  return entropy_of_counts(t.counts, t.total);
}

double entropy(const Dataset& data, int x) { return joint_entropy(data, {x}); }

double conditional_entropy(const Dataset& data, int x,
                           const std::vector<int>& given) {
  for (int g : given)
    if (g == x)
      throw Error(ErrorKind::Argument,
                  "conditional_entropy: x appears in conditioning set");
  double h = joint_entropy(data, concat(given, {x})) -
             joint_entropy(data, given);
  return h < 0.0 ? 0.0 : h;
}

double conditional_mutual_information(const Dataset& data, int x, int y,
                                      const std::vector<int>& z) {
  if (x == y)
    throw Error(ErrorKind::Argument, "mutual information requires x != y");
  // Canonical order keeps the value bit-identical under argument swap.
  if (x > y) std::swap(x, y);
  for (int v : z)
    if (v == x || v == y)
      throw Error(ErrorKind::Argument,
                  "conditioning set overlaps the tested pair");
  double hxz = joint_entropy(data, concat(z, {x}));
  double hyz = joint_entropy(data, concat(z, {y}));
  double hxyz = joint_entropy(data, concat(z, {x, y}));
  double hz = joint_entropy(data, z);
  double v = hxz + hyz - hxyz - hz;
  return v < 0.0 ? 0.0 : v;
}

double mutual_information(const Dataset& data, int x, int y) {
  return conditional_mutual_information(data, x, y, {});
}

double eemi(const Dataset& data, int x, int y, const std::vector<int>& z) {
  double hx = conditional_entropy(data, x, z);
  double hy = conditional_entropy(data, y, z);
  if (hx <= 1e-12 || hy <= 1e-12) return 0.0;
  double i = conditional_mutual_information(data, x, y, z);
  double v = (hy / (hx + hy)) * (i / hx) + (hx / (hx + hy)) * (i / hy);
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace mcme
