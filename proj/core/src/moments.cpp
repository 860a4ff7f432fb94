#include "afc/moments.hpp"

#include <cmath>

#include "afc/quadrature.hpp"
#include "afc/special.hpp"

namespace afc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// x/sin(x) - 1, series for small x.
double x_over_sin_m1(double x) {
  if (std::fabs(x) < 0.1) {
    const double x2 = x * x;
    return x2 * (1.0 / 6.0 + x2 * (7.0 / 360.0 + x2 * (31.0 / 15120.0 + x2 * (127.0 / 604800.0))));
  }
  return x / std::sin(x) - 1.0;
}

// ln Gamma(1+2s) - 2 ln Gamma(1+s), series for small s (zeta expansion).
double ln_gamma_weibull_diff(double s) {
  if (std::fabs(s) < 1e-3) {
    static const double zeta[] = {0.0, 0.0,
                                  1.6449340668482264,  // zeta(2)
                                  1.2020569031595943, 1.0823232337111382, 1.0369277551433699,
                                  1.0173430619844491, 1.0083492773819228, 1.0040773561979443};
    double sum = 0.0, sk = s * s;
    double sign = 1.0, p2 = 4.0;  // 2^k at k=2
    for (int k = 2; k <= 8; ++k) {
      sum += sign * zeta[k] * (p2 - 2.0) * sk / k;
      sk *= s;
      p2 *= 2.0;
      sign = -sign;
    }
    return sum;
  }
  return ln_gamma(1.0 + 2.0 * s) - 2.0 * ln_gamma(1.0 + s);
}

// Gamma(1+2s) - Gamma(1+s)^2 without cancellation (Weibull variance factor).
double weibull_var_factor(double shape) {
  const double s = 1.0 / shape;
  return std::exp(2.0 * ln_gamma(1.0 + s)) * std::expm1(ln_gamma_weibull_diff(s));
}

double weibull_mean_factor(double shape) { return std::exp(ln_gamma(1.0 + 1.0 / shape)); }

// Log-logistic mean factor b = pi s / sin(pi s), s = 1/shape; requires shape > 1.
double loglogistic_mean_factor(double shape) { return 1.0 + x_over_sin_m1(kPi / shape); }

// 2 pi s / sin(2 pi s) - (pi s / sin(pi s))^2, requires shape > 2.
double loglogistic_var_factor(double shape) {
  const double a1 = x_over_sin_m1(kPi / shape);
  const double a2 = x_over_sin_m1(2.0 * kPi / shape);
  return a2 - 2.0 * a1 - a1 * a1;
}

void require_shapes_above(const ModelParams& p, double bound, const char* what) {
  if (!(p.lambda > bound && p.nu > bound))
    throw moment_condition_error(std::string(what) + ": requires lambda > " + std::to_string(bound) +
                                 " and nu > " + std::to_string(bound) + " for family " +
                                 family_name(p.family));
}

double lomax_cov(const ModelParams& p) {
  if (p.tau == 0.0) return 0.0;
  const double f21 = gauss_2f1(p.lambda, 1.0, 2.0 * p.lambda, 1.0 - p.tau);
  return (f21 / (2.0 * p.lambda - 1.0) - 1.0 / (p.lambda - 1.0)) / (p.alpha * p.gamma * (p.nu - 1.0));
}

double weibull_cov(const ModelParams& p) {
  if (p.tau == 0.0) return 0.0;
  const double tl = std::exp(p.lambda * std::log(p.tau));
  const double shrink = std::expm1(-std::log1p(tl / p.nu) / p.lambda);  // (nu/(nu+tau^l))^{1/l} - 1
  return weibull_mean_factor(p.nu) * weibull_mean_factor(p.lambda) * shrink / (p.alpha * p.gamma);
}

double loglogistic_cov(const ModelParams& p) {
  if (p.tau == 0.0) return 0.0;
  const double il = 1.0 / p.lambda, in = 1.0 / p.nu;
  const double z = -std::expm1(p.lambda * std::log(p.tau));  // 1 - tau^lambda
  const double f21 = z == 0.0 ? 1.0 : gauss_2f1(in, il, 1.0 + in, z);
  const double g = std::exp(ln_gamma(il) + ln_gamma(1.0 + in - il) - ln_gamma(1.0 + in));
  const double bracket = g * f21 - kPi / std::sin(kPi * il);
  return kPi * bracket / (p.alpha * p.lambda * p.nu * p.gamma * std::sin(kPi * in));
}

}  // namespace

double closed_form_covariance(const ModelParams& p) {
  p.validate();
  switch (p.family) {
    case FamilyKind::Exponential:
      return -p.tau / (p.alpha * p.gamma * (1.0 + p.tau));
    case FamilyKind::Lomax:
      require_shapes_above(p, 1.0, "closed_form_covariance");
      return lomax_cov(p);
    case FamilyKind::Weibull:
      return weibull_cov(p);
    case FamilyKind::LogLogistic:
      require_shapes_above(p, 1.0, "closed_form_covariance");
      return loglogistic_cov(p);
    default:
      throw unsupported_family_error(
          std::string("closed_form_covariance: no closed form for ") + family_name(p.family) +
          "; use hoeffding_covariance_numeric");
  }
}

MomentSummary theoretical_moments(const ModelParams& p) {
  p.validate();
  MomentSummary m;
  switch (p.family) {
    case FamilyKind::Exponential:
      m.mean_x = 1.0 / p.alpha;
      m.mean_y = 1.0 / p.gamma;
      m.var_x = 1.0 / (p.alpha * p.alpha);
      m.var_y = 1.0 / (p.gamma * p.gamma);
      break;
    case FamilyKind::Lomax: {
      require_shapes_above(p, 2.0, "theoretical_moments");
      const double l = p.lambda, n = p.nu;
      m.mean_x = 1.0 / (p.alpha * (l - 1.0));
      m.mean_y = 1.0 / (p.gamma * (n - 1.0));
      m.var_x = l / (p.alpha * p.alpha * (l - 1.0) * (l - 1.0) * (l - 2.0));
      m.var_y = n / (p.gamma * p.gamma * (n - 1.0) * (n - 1.0) * (n - 2.0));
      break;
    }
    case FamilyKind::Weibull:
      m.mean_x = weibull_mean_factor(p.lambda) / p.alpha;
      m.mean_y = weibull_mean_factor(p.nu) / p.gamma;
      m.var_x = weibull_var_factor(p.lambda) / (p.alpha * p.alpha);
      m.var_y = weibull_var_factor(p.nu) / (p.gamma * p.gamma);
      break;
    case FamilyKind::LogLogistic:
      require_shapes_above(p, 2.0, "theoretical_moments");
      m.mean_x = loglogistic_mean_factor(p.lambda) / p.alpha;
      m.mean_y = loglogistic_mean_factor(p.nu) / p.gamma;
      m.var_x = loglogistic_var_factor(p.lambda) / (p.alpha * p.alpha);
      m.var_y = loglogistic_var_factor(p.nu) / (p.gamma * p.gamma);
      break;
    default:
      throw unsupported_family_error(std::string("theoretical_moments: no closed moments for ") +
                                     family_name(p.family) +
                                     "; use hoeffding_covariance_numeric");
  }
  m.cov = closed_form_covariance(p);
  m.rho = m.cov / std::sqrt(m.var_x * m.var_y);
  return m;
}

double rho_of_tau(FamilyKind f, double lambda, double nu, double tau) {
  if (f == FamilyKind::Exponential) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw domain_error("rho_of_tau: tau must lie in [0,1]");
    return -tau / (1.0 + tau);
  }
  const ModelParams p = ModelParams::make(f, 1.0, lambda, 1.0, nu, tau);
  switch (f) {
    case FamilyKind::Lomax: {
      require_shapes_above(p, 2.0, "rho_of_tau");
      const double vx = lambda / ((lambda - 1.0) * (lambda - 1.0) * (lambda - 2.0));
      const double vy = nu / ((nu - 1.0) * (nu - 1.0) * (nu - 2.0));
      return lomax_cov(p) / std::sqrt(vx * vy);
    }
    case FamilyKind::Weibull:
      return weibull_cov(p) / std::sqrt(weibull_var_factor(lambda) * weibull_var_factor(nu));
    case FamilyKind::LogLogistic:
      require_shapes_above(p, 2.0, "rho_of_tau");
      return loglogistic_cov(p) /
             std::sqrt(loglogistic_var_factor(lambda) * loglogistic_var_factor(nu));
    default:
      throw unsupported_family_error(std::string("rho_of_tau: no closed correlation for ") +
                                     family_name(f));
  }
}

CorrelationBounds correlation_bounds(FamilyKind f, double lambda, double nu) {
  CorrelationBounds b;
  b.rho_max = 0.0;
  b.rho_min = rho_of_tau(f, lambda, nu, 1.0);
  return b;
}

double correlation_infimum(FamilyKind f) {
  switch (f) {
    case FamilyKind::Exponential:
    case FamilyKind::Lomax:
      return -0.5;
    case FamilyKind::Weibull:
      return -std::sqrt(6.0) / kPi;
    case FamilyKind::LogLogistic:
      return -0.54076;  // reported figure; limit of rho_min(lambda*, nu) as nu -> inf
    default:
      throw unsupported_family_error(std::string("correlation_infimum: none documented for ") +
                                     family_name(f));
  }
}

double tau_from_rho(FamilyKind f, double lambda, double nu, double rho_target) {
  if (!(rho_target <= 0.0)) throw domain_error("tau_from_rho: rho_target must be <= 0");
  if (rho_target == 0.0) return 0.0;
  const double rho_min = rho_of_tau(f, lambda, nu, 1.0);
  if (rho_target < rho_min)
    throw domain_error("tau_from_rho: rho_target below the attainable minimum " +
                       std::to_string(rho_min));
  double lo = 0.0, hi = 1.0;  // rho is non-increasing in tau
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double r = rho_of_tau(f, lambda, nu, mid);
    if (std::fabs(r - rho_target) <= 1e-9) return mid;
    if (r > rho_target) lo = mid; else hi = mid;
    if (hi - lo < 1e-16) break;
  }
  return 0.5 * (lo + hi);
}

double tau_from_covariance(const ModelParams& base, double cov_target, int* out_of_range) {
  if (out_of_range) *out_of_range = 0;
  ModelParams p = base;
  if (!(cov_target < 0.0)) {
    if (out_of_range && cov_target > 0.0) *out_of_range = +1;
    return 0.0;
  }
  p.tau = 1.0;
  const double cov_min = closed_form_covariance(p);
  if (cov_target < cov_min) {
    if (out_of_range) *out_of_range = -1;
    return 1.0;
  }
  double lo = 0.0, hi = 1.0;  // covariance is non-increasing in tau
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    p.tau = mid;
    const double c = closed_form_covariance(p);
    if (std::fabs(c - cov_target) <= 1e-12 * (1.0 + std::fabs(cov_target)) || hi - lo < 1e-16)
      return mid;
    if (c > cov_target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

HoeffdingResult hoeffding_covariance_numeric(const ModelParams& p) {
  p.validate();
  HoeffdingResult out;
  if (p.tau == 0.0) {  // integrand identically zero
    out.converged = true;
    return out;
  }
  const double tail = 1e-9;
  const double xmax = marginal_quantile_x(p, 1.0 - tail);
  const double ymax = marginal_quantile_y(p, 1.0 - tail);

  QuadOptions inner_opt;
  inner_opt.abs_tol = 1e-12 / p.gamma;
  inner_opt.rel_tol = 1e-9;
  inner_opt.max_intervals = 600;
  QuadOptions outer_opt;
  outer_opt.abs_tol = 2e-7;
  outer_opt.rel_tol = 1e-8;
  outer_opt.max_intervals = 4000;

  bool inner_ok = true;
  double inner_err_accum = 0.0;
  const auto integrand = [&](double x) {
    const double bx = acceleration(p, x);
    const auto diff = [&](double y) {
      if (y <= 0.0) return 0.0;
      return marginal_survival_y(p, bx / p.gamma * y) - marginal_survival_y(p, y);
    };
    QuadResult r = integrate_adaptive(diff, 0.0, ymax, inner_opt);
    inner_ok = inner_ok && r.converged;
    inner_err_accum = std::max(inner_err_accum, r.abs_error);
    return marginal_survival_x(p, x) * r.value;
  };
  QuadResult outer = integrate_adaptive(integrand, 0.0, xmax, outer_opt);
  out.value = outer.value;
  out.abs_error = outer.abs_error + inner_err_accum * xmax;
  out.converged = outer.converged && inner_ok;
  return out;
}

}  // namespace afc
