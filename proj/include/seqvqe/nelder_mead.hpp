#pragma once

#include <functional>
#include <vector>

namespace seqvqe {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double initial_step = 0.5;
  double f_tolerance = 1e-13;   // stop when the simplex value spread shrinks
  double target_value = -1e308; // stop early once f drops below this
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

// Plain downhill simplex with the standard reflection/expansion/contraction
// coefficients. Derivative-free; good enough for the small smooth problems
// it is used on here.
NelderMeadResult nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, const NelderMeadOptions& options = {});

}  // namespace seqvqe
