#pragma once

#include "afc/error.hpp"

namespace afc {

// Single knob for the precision/speed trade-off of the iterative kernels.
struct Accuracy {
  double abs_tol = 1e-12;
  int max_iter = 500;

  void validate() const {
    if (!(abs_tol > 0.0)) throw domain_error("Accuracy: abs_tol must be > 0");
    if (max_iter < 1) throw domain_error("Accuracy: max_iter must be >= 1");
  }
};

}  // namespace afc
