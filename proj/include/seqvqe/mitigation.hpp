#pragma once

#include <vector>

namespace seqvqe {

// One energy evaluation at noise scale c.
struct NoisePoint {
  double c = 0.0;
  double energy = 0.0;
  double std_err = 0.0;
};

struct ExtrapolationResult {
  double e_star = 0.0;
  int order = 1;
  std::vector<double> weights;       // Richardson node weights (sum to 1)
  std::vector<double> coefficients;  // polynomial fit coefficients
  double std_err = 0.0;
};

// Node weights solving sum w = 1, sum w c^k = 0 for k = 1..n-1; cancels the
// noise expansion through order n-1. Duplicate nodes are rejected.
std::vector<double> richardson_weights(const std::vector<double>& nodes);

// Two-point Richardson estimate (c2 E1 - c1 E2) / (c2 - c1) with stderr
// propagated in quadrature through the weights. Requires p2.c > p1.c.
ExtrapolationResult extrapolate_first_order(const NoisePoint& p1,
                                            const NoisePoint& p2);

// Weighted least-squares polynomial fit in c, evaluated at c = 0. Weights
// are 1/stderr^2 when every point carries one, uniform otherwise; stderr
// comes from the fit covariance (residual-scaled in the uniform case).
ExtrapolationResult extrapolate_polynomial(const std::vector<NoisePoint>& points,
                                           int degree);

}  // namespace seqvqe
