#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "afc/accuracy.hpp"
#include "afc/error.hpp"

namespace afc {

enum class FamilyKind { Exponential, Lomax, Weibull, LogLogistic, HalfCauchy, Gamma };

const char* family_name(FamilyKind f);
FamilyKind family_from_name(std::string_view name);
bool family_has_shapes(FamilyKind f);
// 3 for exponential/half-Cauchy, 5 otherwise.
int family_parameter_count(FamilyKind f);

// Parameter vector theta = (alpha, lambda, gamma, nu, tau). lambda/nu are the
// shape parameters of X and Y and are NaN for the two shapeless families.
// gamma is the rate scale of Y and equals beta(0) for every family.
struct ModelParams {
  FamilyKind family = FamilyKind::Exponential;
  double alpha = 1.0;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double gamma = 1.0;
  double nu = std::numeric_limits<double>::quiet_NaN();
  double tau = 0.0;

  static ModelParams exponential(double alpha, double gamma, double tau);
  static ModelParams lomax(double alpha, double lambda, double gamma, double nu, double tau);
  static ModelParams weibull(double alpha, double lambda, double gamma, double nu, double tau);
  static ModelParams log_logistic(double alpha, double lambda, double gamma, double nu, double tau);
  static ModelParams half_cauchy(double alpha, double gamma, double tau);
  static ModelParams gamma_family(double alpha, double lambda, double gamma, double nu, double tau);

  // Validating constructor; lambda/nu ignored for shapeless families.
  static ModelParams make(FamilyKind f, double alpha, double lambda, double gamma, double nu,
                          double tau);

  // Skips validation. Only for diagnostic probes (e.g. demonstrating that
  // tau > 1 breaks joint-survival validity); never feed to samplers or
  // estimators.
  static ModelParams unchecked(FamilyKind f, double alpha, double lambda, double gamma, double nu,
                               double tau);

  void validate() const;
};

struct JointPoint {
  double x;
  double y;
};

// ---- X-marginal analytics -------------------------------------------------

double marginal_survival_x(const ModelParams& p, double x);
double marginal_survival_y(const ModelParams& p, double y);
double marginal_cdf_x(const ModelParams& p, double x);
double marginal_cdf_y(const ModelParams& p, double y);
double marginal_density_x(const ModelParams& p, double x);
double marginal_density_y(const ModelParams& p, double y);
double log_marginal_density_x(const ModelParams& p, double x);
double log_marginal_density_y(const ModelParams& p, double y);
double marginal_quantile_x(const ModelParams& p, double u);
double marginal_quantile_y(const ModelParams& p, double u);

// Hazard of the X marginal, simplified closed form per family.
double hazard_x(const ModelParams& p, double x);
// Cumulative hazard -log survival of the X marginal; x >= 0.
double cumulative_hazard_x(const ModelParams& p, double x);

// ---- Acceleration and joint objects ---------------------------------------

// Exponent in beta(x) = gamma / [F0bar(tau x)]^{c*}: 1 or 1/nu.
double c_star(const ModelParams& p);

double acceleration(const ModelParams& p, double x);
double log_acceleration(const ModelParams& p, double x);

double joint_survival(const ModelParams& p, JointPoint pt);

// Mixed partial of the joint survival, evaluated through the regrouped
// log-space closed form (nonnegative for tau in [0,1]).
double joint_density(const ModelParams& p, JointPoint pt);
// -inf when the density underflows to zero.
double log_joint_density(const ModelParams& p, JointPoint pt);

double log_likelihood(const ModelParams& p, const std::vector<JointPoint>& data);

// Exponential family only: F_{Y|X=x}(y) = 1 - e^{-c y}(1 + tau c y),
// c = gamma e^{alpha tau x}.
double conditional_cdf_y_given_x(const ModelParams& p, double x, double y);

}  // namespace afc
