#include "afc/validation.hpp"

#include <cmath>

#include "afc/moments.hpp"

namespace afc {

bool ValidationReport::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

std::vector<double> log_spaced_grid(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw domain_error("log_spaced_grid: bad arguments");
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return g;
}

std::vector<JointPoint> quantile_grid(const ModelParams& p, int nx, int ny, double q_lo,
                                      double q_hi) {
  if (nx < 2 || ny < 2 || !(q_lo > 0.0 && q_hi < 1.0 && q_lo < q_hi))
    throw domain_error("quantile_grid: bad arguments");
  std::vector<JointPoint> grid;
  grid.reserve(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    const double qx = q_lo + (q_hi - q_lo) * i / (nx - 1);
    const double x = marginal_quantile_x(p, qx);
    for (int j = 0; j < ny; ++j) {
      const double qy = q_lo + (q_hi - q_lo) * j / (ny - 1);
      grid.push_back({x, marginal_quantile_y(p, qy)});
    }
  }
  return grid;
}

CheckResult check_r_bounds(const ModelParams& p, const std::vector<double>& x_grid,
                           const std::vector<double>& tau_grid) {
  CheckResult c;
  c.name = "r-bounds";
  c.grid = std::to_string(x_grid.size()) + " x-nodes, " + std::to_string(tau_grid.size()) +
           " tau-nodes";
  c.tolerance = 1e-12;
  double worst = 0.0;
  for (double tau : tau_grid) {
    if (!(tau > 0.0)) continue;  // r(x, 0) = 0 by continuity
    for (double x : x_grid) {
      const double r = tau * hazard_x(p, tau * x) / hazard_x(p, x);
      const double viol = std::max(r - 1.0, std::max(-r, 0.0));
      if (viol > worst) {
        worst = viol;
        c.worst_x = x;
        c.worst_y = tau;
      }
    }
  }
  c.worst_violation = worst;
  c.pass = worst <= c.tolerance;
  return c;
}

CheckResult check_phi_monotone(const ModelParams& p, const std::vector<double>& x_grid) {
  CheckResult c;
  c.name = "phi-monotone";
  c.grid = std::to_string(x_grid.size()) + " log-spaced nodes [" +
           std::to_string(x_grid.front()) + ", " + std::to_string(x_grid.back()) + "]";
  c.tolerance = 1e-10;
  double worst = 0.0;
  double prev_phi = x_grid.front() * hazard_x(p, x_grid.front());
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    const double phi = x_grid[i] * hazard_x(p, x_grid[i]);
    const double drop = (prev_phi - phi) / std::max(1.0, std::fabs(prev_phi));
    if (drop > worst) {
      worst = drop;
      c.worst_x = x_grid[i];
    }
    prev_phi = phi;
  }
  c.worst_violation = worst;
  c.pass = worst <= c.tolerance;
  return c;
}

namespace {

double mixed_fd(const ModelParams& p, double x, double y, double hx, double hy) {
  const double spp = joint_survival(p, {x + hx, y + hy});
  const double spm = joint_survival(p, {x + hx, y - hy});
  const double smp = joint_survival(p, {x - hx, y + hy});
  const double smm = joint_survival(p, {x - hx, y - hy});
  return (spp - spm - smp + smm) / (4.0 * hx * hy);
}

// Mixed FD with Richardson extrapolation on (h, h/2).
double mixed_fd_richardson(const ModelParams& p, double x, double y, double rel_h) {
  const double hx = rel_h * x, hy = rel_h * y;
  const double f1 = mixed_fd(p, x, y, hx, hy);
  const double f2 = mixed_fd(p, x, y, 0.5 * hx, 0.5 * hy);
  return (4.0 * f2 - f1) / 3.0;
}

}  // namespace

std::vector<CheckResult> check_joint_survival_validity(const ModelParams& p,
                                                       const std::vector<JointPoint>& grid) {
  const bool diagnostic = p.tau > 1.0;

  CheckResult nonneg;
  nonneg.name = "joint-validity-nonnegative";
  nonneg.grid = std::to_string(grid.size()) + " joint nodes";
  nonneg.tolerance = 1e-8;

  CheckResult match;
  match.name = "joint-validity-density-match";
  match.grid = nonneg.grid;
  match.tolerance = 1e-5;

  // Scale for the relative comparison floor.
  double f_max = 0.0;
  std::vector<double> dens;
  if (!diagnostic) {
    dens.reserve(grid.size());
    for (const JointPoint& pt : grid) {
      const double f = joint_density(p, pt);
      dens.push_back(f);
      f_max = std::max(f_max, f);
    }
  }

  double worst_neg = 0.0, worst_rel = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const JointPoint pt = grid[i];
    static const double ladder[] = {1e-5, 1e-4, 1e-3, 1e-2};
    double fd_best = mixed_fd_richardson(p, pt.x, pt.y, ladder[0]);
    if (!diagnostic) {
      const double f = dens[i];
      const double denom = std::max(std::fabs(f), 1e-10 * f_max);
      double rel_best = std::fabs(fd_best - f) / denom;
      for (int l = 1; l < 4 && rel_best > match.tolerance; ++l) {
        const double fd = mixed_fd_richardson(p, pt.x, pt.y, ladder[l]);
        const double rel = std::fabs(fd - f) / denom;
        if (rel < rel_best) {
          rel_best = rel;
          fd_best = fd;
        }
      }
      if (rel_best > worst_rel) {
        worst_rel = rel_best;
        match.worst_x = pt.x;
        match.worst_y = pt.y;
      }
    } else {
      // No trustworthy density reference out of contract; widen the step so
      // roundoff cannot fake a sign.
      fd_best = mixed_fd_richardson(p, pt.x, pt.y, 1e-3);
    }
    const double neg = std::max(0.0, -fd_best);
    if (neg > worst_neg) {
      worst_neg = neg;
      nonneg.worst_x = pt.x;
      nonneg.worst_y = pt.y;
    }
  }

  nonneg.worst_violation = worst_neg;
  nonneg.pass = worst_neg <= nonneg.tolerance;
  if (diagnostic) return {nonneg};
  match.worst_violation = worst_rel;
  match.pass = worst_rel <= match.tolerance;
  return {nonneg, match};
}

CheckResult check_covariance_sign(const ModelParams& p) {
  CheckResult c;
  c.name = "covariance-sign";
  c.grid = "adaptive quadrature, 1-1e-9 quantile truncation";
  c.tolerance = 1e-8;
  const HoeffdingResult h = hoeffding_covariance_numeric(p);
  c.worst_violation = std::max(0.0, h.value);
  c.pass = h.value <= c.tolerance;
  return c;
}

ValidationReport validate_family(const ModelParams& p) {
  p.validate();
  ValidationReport rep;
  rep.family = p.family;

  const std::vector<double> x_small = log_spaced_grid(1e-3, 1e3, 200);
  std::vector<double> taus;
  for (int i = 1; i <= 10; ++i) taus.push_back(0.1 * i);
  rep.checks.push_back(check_r_bounds(p, x_small, taus));

  const std::vector<double> x_big = log_spaced_grid(1e-4, 1e4, 1200);
  rep.checks.push_back(check_phi_monotone(p, x_big));

  const std::vector<JointPoint> grid = quantile_grid(p, 20, 20, 0.02, 0.98);
  for (CheckResult& c : check_joint_survival_validity(p, grid)) rep.checks.push_back(c);

  rep.checks.push_back(check_covariance_sign(p));
  return rep;
}

}  // namespace afc
