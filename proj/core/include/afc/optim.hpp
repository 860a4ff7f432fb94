#pragma once

#include <functional>
#include <vector>

namespace afc {

struct OptimOptions {
  int max_iterations = 400;
  double grad_step = 1e-6;      // central-difference step: grad_step * max(1, |x_i|)
  double proj_grad_tol = 1e-6;  // infinity norm of the projected gradient
  double rel_f_tol = 1e-10;     // relative objective change
  int max_backtracks = 45;
  int max_expansions = 30;
};

struct OptimResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
  long evaluations = 0;
  double proj_grad_norm = 0.0;
  bool converged = false;
};

// Box-constrained quasi-Newton (projected BFGS with Armijo line search and
// step expansion). Objective values that come back non-finite are treated as
// rejected trial points, never as fatal.
OptimResult minimize_box(const std::function<double(const std::vector<double>&)>& f,
                         std::vector<double> x0, const std::vector<double>& lower,
                         const std::vector<double>& upper, const OptimOptions& opt = {});

}  // namespace afc
