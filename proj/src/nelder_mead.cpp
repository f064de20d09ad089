#include "seqvqe/nelder_mead.hpp"

#include <algorithm>
#include <cstddef>

namespace seqvqe {

NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> value(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
  for (std::size_t i = 0; i <= n; ++i) value[i] = f(simplex[i]);

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    {
      std::vector<std::vector<double>> s2;
      std::vector<double> v2;
      s2.reserve(n + 1);
      v2.reserve(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        s2.push_back(std::move(simplex[order[i]]));
        v2.push_back(value[order[i]]);
      }
      simplex = std::move(s2);
      value = std::move(v2);
    }
    if (value[0] <= options.target_value) break;
    if (value[n] - value[0] < options.f_tolerance) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k)
        x[k] = centroid[k] + t * (simplex[n][k] - centroid[k]);
      return x;
    };

    auto reflected = along(-1.0);
    double fr = f(reflected);
    if (fr < value[0]) {
      auto expanded = along(-2.0);
      double fe = f(expanded);
      if (fe < fr) {
        simplex[n] = std::move(expanded);
        value[n] = fe;
      } else {
        simplex[n] = std::move(reflected);
        value[n] = fr;
      }
    } else if (fr < value[n - 1]) {
      simplex[n] = std::move(reflected);
      value[n] = fr;
    } else {
      auto contracted = along(fr < value[n] ? -0.5 : 0.5);
      double fc = f(contracted);
      if (fc < std::min(fr, value[n])) {
        simplex[n] = std::move(contracted);
        value[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t k = 0; k < n; ++k)
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          value[i] = f(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (value[i] < value[best]) best = i;
  return {simplex[best], value[best], it};
}

}  // namespace seqvqe
