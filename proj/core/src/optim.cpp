#include "afc/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "afc/error.hpp"

namespace afc {

namespace {

constexpr double kBig = 1e300;

double clipped(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

}  // namespace

OptimResult minimize_box(const std::function<double(const std::vector<double>&)>& fraw,
                         std::vector<double> x, const std::vector<double>& lo,
                         const std::vector<double>& hi, const OptimOptions& opt) {
  const std::size_t n = x.size();
  if (lo.size() != n || hi.size() != n) throw domain_error("minimize_box: bound size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(lo[i] <= hi[i])) throw domain_error("minimize_box: lower bound above upper bound");
    x[i] = clipped(x[i], lo[i], hi[i]);
  }

  OptimResult res;
  const auto f = [&](const std::vector<double>& v) {
    ++res.evaluations;
    const double val = fraw(v);
    return std::isfinite(val) ? val : kBig;
  };

  double fx = f(x);

  std::vector<double> g(n), gn(n), d(n), xt(n), s(n), yv(n);
  // Inverse Hessian estimate, dense (n <= 5 in practice).
  std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
  const auto reset_H = [&] {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) H[i][j] = i == j ? 1.0 : 0.0;
  };
  reset_H();

  const auto gradient = [&](const std::vector<double>& at, double fat, std::vector<double>& out) {
    std::vector<double> v = at;
    for (std::size_t i = 0; i < n; ++i) {
      const double h = opt.grad_step * std::max(1.0, std::fabs(at[i]));
      const double up = std::min(at[i] + h, hi[i]);
      const double dn = std::max(at[i] - h, lo[i]);
      if (up > at[i] && dn < at[i]) {
        v[i] = up;
        const double fu = f(v);
        v[i] = dn;
        const double fd = f(v);
        out[i] = (fu - fd) / (up - dn);
      } else if (up > at[i]) {
        v[i] = up;
        out[i] = (f(v) - fat) / (up - at[i]);
      } else if (dn < at[i]) {
        v[i] = dn;
        out[i] = (fat - f(v)) / (at[i] - dn);
      } else {
        out[i] = 0.0;
      }
      v[i] = at[i];
    }
  };

  const auto proj_grad_norm = [&](const std::vector<double>& at, const std::vector<double>& grad) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tol = 1e-12 * std::max(1.0, std::fabs(at[i]));
      double gi = grad[i];
      if (at[i] <= lo[i] + tol && gi > 0.0) gi = 0.0;
      if (at[i] >= hi[i] - tol && gi < 0.0) gi = 0.0;
      m = std::max(m, std::fabs(gi));
    }
    return m;
  };

  gradient(x, fx, g);

  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    res.iterations = iter + 1;
    res.proj_grad_norm = proj_grad_norm(x, g);
    if (res.proj_grad_norm < opt.proj_grad_tol) {
      res.converged = true;
      break;
    }

    // d = -H g, with components pushing out of an active bound zeroed.
    double dTg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += H[i][j] * g[j];
      d[i] = -v;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double tol = 1e-12 * std::max(1.0, std::fabs(x[i]));
      if (x[i] <= lo[i] + tol && d[i] < 0.0) d[i] = 0.0;
      if (x[i] >= hi[i] - tol && d[i] > 0.0) d[i] = 0.0;
      dTg += d[i] * g[i];
    }
    if (!(dTg < 0.0)) {  // not a descent direction; steepest descent restart
      reset_H();
      dTg = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double tol = 1e-12 * std::max(1.0, std::fabs(x[i]));
        d[i] = -g[i];
        if (x[i] <= lo[i] + tol && d[i] < 0.0) d[i] = 0.0;
        if (x[i] >= hi[i] - tol && d[i] > 0.0) d[i] = 0.0;
        dTg += d[i] * g[i];
      }
      if (!(dTg < 0.0)) {
        res.converged = true;  // projected gradient vanished along the box
        break;
      }
    }

    // Armijo backtracking with projection; expand while the full step keeps
    // improving (boundary runs need step growth).
    const double c1 = 1e-4;
    double t = 1.0;
    double ft = kBig;
    bool found = false;
    const auto trial_at = [&](double step) {
      for (std::size_t i = 0; i < n; ++i) xt[i] = clipped(x[i] + step * d[i], lo[i], hi[i]);
    };
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      trial_at(t);
      double move = 0.0;
      for (std::size_t i = 0; i < n; ++i) move += (xt[i] - x[i]) * g[i];
      ft = f(xt);
      if (ft <= fx + c1 * move && ft < fx) {
        found = true;
        break;
      }
      t *= 0.5;
    }
    if (found && t == 1.0) {
      double best_t = t, best_f = ft;
      std::vector<double> best_x = xt;
      double te = t;
      for (int e = 0; e < opt.max_expansions; ++e) {
        te *= 2.0;
        trial_at(te);
        if (xt == best_x) break;  // fully clipped, no further progress
        const double fe = f(xt);
        if (fe < best_f) {
          best_f = fe;
          best_x = xt;
          best_t = te;
        } else {
          break;
        }
      }
      xt = best_x;
      ft = best_f;
      t = best_t;
    }
    if (!found) {
      // No acceptable step along d; declare convergence by line-search failure
      // only if the projected gradient is already small-ish.
      res.converged = res.proj_grad_norm < std::sqrt(opt.proj_grad_tol);
      break;
    }

    gradient(xt, ft, gn);
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = xt[i] - x[i];
      yv[i] = gn[i] - g[i];
      sy += s[i] * yv[i];
      ss += s[i] * s[i];
      yy += yv[i] * yv[i];
    }
    const double f_change = std::fabs(fx - ft);
    x = xt;
    std::swap(g, gn);
    const double f_prev = fx;
    fx = ft;

    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      // BFGS update of the inverse Hessian.
      const double rho = 1.0 / sy;
      std::vector<double> Hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i][j] * yv[j];
      double yHy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yHy += yv[i] * Hy[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          H[i][j] += rho * ((1.0 + rho * yHy) * s[i] * s[j] - Hy[i] * s[j] - s[i] * Hy[j]);
    }

    if (f_change <= opt.rel_f_tol * (1.0 + std::fabs(f_prev))) {
      gradient(x, fx, g);
      res.proj_grad_norm = proj_grad_norm(x, g);
      res.converged = true;
      break;
    }
  }

  res.x = x;
  res.f = fx;
  if (!res.converged && res.iterations >= opt.max_iterations) {
    gradient(x, fx, g);
    res.proj_grad_norm = proj_grad_norm(x, g);
    res.converged = res.proj_grad_norm < opt.proj_grad_tol;
  }
  return res;
}

}  // namespace afc
