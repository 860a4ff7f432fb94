#pragma once

#include <functional>
#include <vector>

namespace afc {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated
  long evaluations = 0;
  bool converged = false;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

// Globally adaptive Gauss-Kronrod 7/15 on a finite interval [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadOptions& opt = {});

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(int n);

}  // namespace afc
