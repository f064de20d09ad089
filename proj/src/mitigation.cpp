#include "seqvqe/mitigation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace seqvqe {

std::vector<double> richardson_weights(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  if (n < 2)
    throw std::invalid_argument("richardson_weights: need at least two nodes");
  for (int i = 0; i < n; ++i) {
    if (nodes[i] <= 0.0)
      throw std::invalid_argument("richardson_weights: nodes must be positive");
    for (int j = i + 1; j < n; ++j)
      if (nodes[i] == nodes[j])
        throw std::invalid_argument("richardson_weights: duplicate nodes");
  }
  Eigen::MatrixXd vandermonde(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  for (int i = 0; i < n; ++i) {
    double power = 1.0;
    for (int k = 0; k < n; ++k) {
      vandermonde(k, i) = power;
      power *= nodes[i];
    }
  }
  const Eigen::VectorXd w = vandermonde.fullPivLu().solve(rhs);
  return {w.data(), w.data() + n};
}

ExtrapolationResult extrapolate_first_order(const NoisePoint& p1,
                                            const NoisePoint& p2) {
  if (p2.c <= p1.c)
    throw std::domain_error("extrapolate_first_order: nodes must increase");
  ExtrapolationResult out;
  out.order = 1;
  out.weights = richardson_weights({p1.c, p2.c});
  out.e_star = out.weights[0] * p1.energy + out.weights[1] * p2.energy;
  out.std_err = std::sqrt(out.weights[0] * out.weights[0] * p1.std_err * p1.std_err +
                          out.weights[1] * out.weights[1] * p2.std_err * p2.std_err);
  return out;
}

ExtrapolationResult extrapolate_polynomial(const std::vector<NoisePoint>& points,
                                           int degree) {
  const int n = static_cast<int>(points.size());
  if (degree < 1)
    throw std::invalid_argument("extrapolate_polynomial: degree must be >= 1");
  if (n < degree + 1)
    throw std::invalid_argument("extrapolate_polynomial: underdetermined fit");

  bool weighted = true;
  for (const auto& p : points) weighted = weighted && p.std_err > 0.0;

  const int cols = degree + 1;
  Eigen::MatrixXd design(n, cols);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    double power = 1.0;
    for (int k = 0; k < cols; ++k) {
      design(i, k) = power;
      power *= points[i].c;
    }
    y(i) = points[i].energy;
    w(i) = weighted ? 1.0 / (points[i].std_err * points[i].std_err) : 1.0;
  }

  const Eigen::MatrixXd normal =
      design.transpose() * w.asDiagonal() * design;
  const Eigen::VectorXd rhs = design.transpose() * (w.asDiagonal() * y);
  const Eigen::MatrixXd covariance = normal.inverse();
  const Eigen::VectorXd beta = covariance * rhs;

  ExtrapolationResult out;
  out.order = degree;
  out.coefficients = {beta.data(), beta.data() + cols};
  out.e_star = beta(0);

  double cov00 = covariance(0, 0);
  if (!weighted) {
    // Scale by the residual variance; an interpolating fit has none.
    const Eigen::VectorXd residual = y - design * beta;
    const int dof = n - cols;
    cov00 *= dof > 0 ? residual.squaredNorm() / dof : 0.0;
  }
  out.std_err = std::sqrt(std::max(0.0, cov00));
  return out;
}

}  // namespace seqvqe
