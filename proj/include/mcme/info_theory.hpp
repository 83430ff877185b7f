#pragma once
#include <vector>

#include "mcme/dataset.hpp"

namespace mcme {

// All quantities in nats from empirical frequencies; 0·ln0 = 0; negatives
// from roundoff clamped to 0.
double entropy(const Dataset& data, int x);
double joint_entropy(const Dataset& data, const std::vector<int>& vars);
double conditional_entropy(const Dataset& data, int x,
                           const std::vector<int>& given);
double mutual_information(const Dataset& data, int x, int y);
double conditional_mutual_information(const Dataset& data, int x, int y,
                                      const std::vector<int>& z);

// Entropy-weighted association in [0,1]: with h_x = H(X|Z), h_y = H(Y|Z),
// i = I(X;Y|Z), returns (h_y/(h_x+h_y))·(i/h_x) + (h_x/(h_x+h_y))·(i/h_y).
// Either conditional entropy at 0 (constant given Z) yields 0.
double eemi(const Dataset& data, int x, int y, const std::vector<int>& z = {});

}  // namespace mcme
