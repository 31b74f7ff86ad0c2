#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fcmp {

struct NelderMeadConfig {
  std::size_t max_iterations = 5000;
  double tolerance = 1e-10;   // simplex spread in x (max-norm) and in f
  double initial_step = 0.1;  // scaled by max(1, |x0_i|)
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  std::size_t restarts = 0;  // fresh simplex around the incumbent after convergence

  void validate() const;
};

struct NelderMeadResult {
  std::vector<double> argmin;
  double value;
  std::size_t iterations;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Non-finite objective values are treated as +infinity.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0,
                             const NelderMeadConfig& config = {});

}  // namespace fcmp
