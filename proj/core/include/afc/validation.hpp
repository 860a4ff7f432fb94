#pragma once

#include <string>
#include <vector>

#include "afc/family.hpp"

namespace afc {

struct CheckResult {
  std::string name;
  std::string grid;  // human-readable description of the grid used
  bool pass = false;
  double tolerance = 0.0;
  double worst_violation = 0.0;  // 0 when clean; pass <=> worst <= tolerance
  double worst_x = std::numeric_limits<double>::quiet_NaN();
  double worst_y = std::numeric_limits<double>::quiet_NaN();
};

struct ValidationReport {
  FamilyKind family = FamilyKind::Exponential;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

std::vector<double> log_spaced_grid(double lo, double hi, int n);

// Quantile-spaced joint grid; q in [q_lo, q_hi] per coordinate.
std::vector<JointPoint> quantile_grid(const ModelParams& p, int nx, int ny, double q_lo,
                                      double q_hi);

// r(x, tau) = tau h0(tau x)/h0(x) in [0, 1] at every node. tau values above 1
// are permitted here for diagnostic probes of the bound.
CheckResult check_r_bounds(const ModelParams& p, const std::vector<double>& x_grid,
                           const std::vector<double>& tau_grid);

// phi(x) = x h0(x) non-decreasing between consecutive grid nodes.
CheckResult check_phi_monotone(const ModelParams& p, const std::vector<double>& x_grid);

// Mixed central finite difference of the joint survival: nonnegative at every
// node, and matching joint_density within 1e-5 relative. tau > 1 (diagnostic
// mode, unchecked params) runs the nonnegativity probe only.
std::vector<CheckResult> check_joint_survival_validity(const ModelParams& p,
                                                       const std::vector<JointPoint>& grid);

// hoeffding_covariance_numeric <= 1e-8.
CheckResult check_covariance_sign(const ModelParams& p);

// All checks on the spec's default grids.
ValidationReport validate_family(const ModelParams& p);

}  // namespace afc
