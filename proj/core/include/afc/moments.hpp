#pragma once

#include "afc/family.hpp"

namespace afc {

// Theoretical E/Var/Cov/rho bundle for one parameterization.
struct MomentSummary {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 0.0;
  double var_y = 0.0;
  double cov = 0.0;
  double rho = 0.0;
};

struct CorrelationBounds {
  double rho_min = 0.0;  // value of rho at tau = 1 for the given shapes
  double rho_max = 0.0;  // always 0 (tau = 0)
};

// Closed-form moments. Exponential, Lomax, Weibull, LogLogistic only;
// Lomax/LogLogistic further require lambda > 2 and nu > 2 (variances).
MomentSummary theoretical_moments(const ModelParams& p);

// Closed-form covariance alone; Lomax/LogLogistic require lambda, nu > 1.
double closed_form_covariance(const ModelParams& p);

// rho(tau) for the four closed-form families; rates cancel.
double rho_of_tau(FamilyKind f, double lambda, double nu, double tau);

CorrelationBounds correlation_bounds(FamilyKind f, double lambda, double nu);

// Documented global infimum of rho over all admissible shapes:
// -1/2 (exponential, Lomax), -sqrt(6)/pi (Weibull), -0.54076 (log-logistic).
double correlation_infimum(FamilyKind f);

// Solves rho(tau) = rho_target by bisection on [0, 1];
// |rho(tau) - rho_target| <= 1e-9.
double tau_from_rho(FamilyKind f, double lambda, double nu, double rho_target);

// Solves closed_form_covariance = cov_target on tau in [0, 1]; result is
// clamped to the boundary when the target is outside the attainable range
// (out_of_range flags which side, -1/0/+1).
double tau_from_covariance(const ModelParams& shapes_and_rates, double cov_target,
                           int* out_of_range = nullptr);

struct HoeffdingResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
};

// Cov(X,Y) = double integral of F0bar(x) [F1bar(beta(x) y) - F1bar(gamma y)],
// nested adaptive quadrature with the domain truncated at the 1 - 1e-9
// marginal quantiles. Works for every family; the oracle for closed forms and
// the only covariance route for half-Cauchy/gamma. (For half-Cauchy the full
// integral diverges -- no mean exists -- so the value is a truncated-domain
// diagnostic, still sign-valid.)
HoeffdingResult hoeffding_covariance_numeric(const ModelParams& p);

}  // namespace afc
