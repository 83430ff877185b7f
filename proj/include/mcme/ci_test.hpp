#pragma once
#include <cstdint>
#include <vector>

#include "mcme/dataset.hpp"

namespace mcme {

struct CiResult {
  double g2 = 0.0;
  int64_t dof = 1;
  double p_value = 1.0;
  double log_p = 0.0;     // ln p, kept separately: p underflows near g2 ~ 1.4e3
  bool independent = true;  // p_value >= alpha of the call
  bool degenerate = false;  // a constant variable forced independence
};

// G^2 = 2 sum N_xyz ln(N_xyz N_z / (N_xz N_yz)), zero cells skipped.
double g2_statistic(const Dataset& data, int x, int y,
                    const std::vector<int>& z);

// (|D(x)|-1)(|D(y)|-1) prod |D(z_i)| from meta cardinalities; a zero product
// (constant variable) reports 1 with *degenerate set.
int64_t degrees_of_freedom(int x, int y, const std::vector<int>& z,
                           const std::vector<VariableMeta>& meta,
                           bool* degenerate = nullptr);

// Upper tail Q(dof/2, x/2) of the chi-square distribution via the
// regularized incomplete gamma: lower series for x < dof+1, Lentz continued
// fraction otherwise. chi2_logsf evaluates the fraction in log space so the
// ordering of extreme statistics survives double underflow.
double chi2_sf(double x, double dof);
double chi2_logsf(double x, double dof);
// Upper quantile: x such that chi2_sf(x, dof) == alpha.
double chi2_quantile(double alpha, double dof);

CiResult assoc(const Dataset& data, int x, int y, const std::vector<int>& z,
               double alpha);

// Diagnostic only: maximize p over subsets S of pool with |S| <= 2,
// returning the attaining subset. Pool capped at 4.
struct MinAssocResult {
  CiResult result;
  std::vector<int> witness;
};
MinAssocResult min_assoc(const Dataset& data, int x, int y,
                         std::vector<int> pool, double alpha);

}  // namespace mcme
