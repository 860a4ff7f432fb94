#include "afc/family.hpp"

#include <algorithm>
#include <cmath>

#include "afc/special.hpp"

namespace afc {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 36.0) return z;
  if (z < -700.0) return 0.0;
  return std::log1p(std::exp(z));
}

double logsumexp2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// One coordinate of the model: same family, its own rate and shape.
struct Marginal {
  FamilyKind family;
  double rate;
  double shape;
};

Marginal x_marginal(const ModelParams& p) { return {p.family, p.alpha, p.lambda}; }
Marginal y_marginal(const ModelParams& p) { return {p.family, p.gamma, p.nu}; }

// -log survival at v >= 0.
double cum_hazard(const Marginal& m, double v) {
  if (v == 0.0) return 0.0;
  if (!(v < kInf)) return kInf;
  const double u = m.rate * v;
  switch (m.family) {
    case FamilyKind::Exponential:
      return u;
    case FamilyKind::Lomax:
      return m.shape * std::log1p(u);
    case FamilyKind::Weibull:
      return std::exp(m.shape * std::log(u));
    case FamilyKind::LogLogistic:
      return softplus(m.shape * std::log(u));
    case FamilyKind::HalfCauchy:
      if (u <= 1.0) return -std::log1p(-(2.0 / kPi) * std::atan(u));
      return -std::log((2.0 / kPi) * std::atan(1.0 / u));
    case FamilyKind::Gamma:
      return -log_regularized_gamma_q(m.shape, u);
  }
  throw domain_error("cum_hazard: bad family");
}

double survival(const Marginal& m, double v) { return std::exp(-cum_hazard(m, v)); }

double cdf(const Marginal& m, double v) {
  if (v <= 0.0) return 0.0;
  const double u = m.rate * v;
  switch (m.family) {
    case FamilyKind::Exponential:
      return -std::expm1(-u);
    case FamilyKind::Lomax:
      return -std::expm1(-m.shape * std::log1p(u));
    case FamilyKind::Weibull:
      return -std::expm1(-std::exp(m.shape * std::log(u)));
    case FamilyKind::LogLogistic: {
      const double z = m.shape * std::log(u);  // log t
      if (z > 36.0) return 1.0 / (1.0 + std::exp(-z));
      const double t = std::exp(z);
      return t / (1.0 + t);
    }
    case FamilyKind::HalfCauchy:
      return (2.0 / kPi) * std::atan(u);
    case FamilyKind::Gamma:
      return regularized_gamma_p(m.shape, u);
  }
  throw domain_error("cdf: bad family");
}

double log_density(const Marginal& m, double v, double log_v) {
  const double lu = std::log(m.rate) + log_v;  // log(rate * v)
  const double u = std::exp(lu);
  switch (m.family) {
    case FamilyKind::Exponential:
      return std::log(m.rate) - u;
    case FamilyKind::Lomax:
      return std::log(m.rate * m.shape) - (m.shape + 1.0) * softplus(lu);
    case FamilyKind::Weibull: {
      const double z = m.shape * lu;
      return std::log(m.rate * m.shape) + (m.shape - 1.0) * lu - (z > 709.0 ? kInf : std::exp(z));
    }
    case FamilyKind::LogLogistic:
      return std::log(m.rate * m.shape) + (m.shape - 1.0) * lu - 2.0 * softplus(m.shape * lu);
    case FamilyKind::HalfCauchy:
      return std::log(2.0 * m.rate / kPi) - softplus(2.0 * lu);
    case FamilyKind::Gamma:
      return std::log(m.rate) + (m.shape - 1.0) * lu - u - ln_gamma(m.shape);
  }
  throw domain_error("log_density: bad family");
}

double log_density(const Marginal& m, double v) { return log_density(m, v, std::log(v)); }

double hazard(const Marginal& m, double v) {
  const double u = m.rate * v;
  switch (m.family) {
    case FamilyKind::Exponential:
      return m.rate;
    case FamilyKind::Lomax:
      return m.rate * m.shape / (1.0 + u);
    case FamilyKind::Weibull:
      return m.shape * m.rate * std::pow(u, m.shape - 1.0);
    case FamilyKind::LogLogistic: {
      const double z = m.shape * std::log(u);
      return m.rate * m.shape * std::exp((m.shape - 1.0) * std::log(u) - softplus(z));
    }
    case FamilyKind::HalfCauchy:
      return m.rate / ((1.0 + u * u) * std::atan(1.0 / u));
    case FamilyKind::Gamma:
      return std::exp(log_density(m, v) + cum_hazard(m, v));
  }
  throw domain_error("hazard: bad family");
}

double quantile(const Marginal& m, double u) {
  switch (m.family) {
    case FamilyKind::Exponential:
      return -std::log1p(-u) / m.rate;
    case FamilyKind::Lomax:
      return std::expm1(-std::log1p(-u) / m.shape) / m.rate;
    case FamilyKind::Weibull:
      return std::pow(-std::log1p(-u), 1.0 / m.shape) / m.rate;
    case FamilyKind::LogLogistic:
      return std::exp((std::log(u) - std::log1p(-u)) / m.shape) / m.rate;
    case FamilyKind::HalfCauchy:
      return std::tan(0.5 * kPi * u) / m.rate;
    case FamilyKind::Gamma:
      return inverse_regularized_gamma_p(m.shape, u) / m.rate;
  }
  throw domain_error("quantile: bad family");
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw domain_error(std::string(what) + " must be positive and finite");
}

void require_prob_open(double u, const char* what) {
  if (!(u > 0.0 && u < 1.0)) throw domain_error(std::string(what) + " must lie in (0,1)");
}

}  // namespace

const char* family_name(FamilyKind f) {
  switch (f) {
    case FamilyKind::Exponential: return "exponential";
    case FamilyKind::Lomax: return "lomax";
    case FamilyKind::Weibull: return "weibull";
    case FamilyKind::LogLogistic: return "log-logistic";
    case FamilyKind::HalfCauchy: return "half-cauchy";
    case FamilyKind::Gamma: return "gamma";
  }
  return "?";
}

FamilyKind family_from_name(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "exponential" || s == "exp") return FamilyKind::Exponential;
  if (s == "lomax") return FamilyKind::Lomax;
  if (s == "weibull") return FamilyKind::Weibull;
  if (s == "log-logistic" || s == "loglogistic" || s == "log_logistic") return FamilyKind::LogLogistic;
  if (s == "half-cauchy" || s == "halfcauchy" || s == "half_cauchy") return FamilyKind::HalfCauchy;
  if (s == "gamma") return FamilyKind::Gamma;
  throw domain_error("unknown family name: " + s);
}

bool family_has_shapes(FamilyKind f) {
  return f != FamilyKind::Exponential && f != FamilyKind::HalfCauchy;
}

int family_parameter_count(FamilyKind f) { return family_has_shapes(f) ? 5 : 3; }

ModelParams ModelParams::make(FamilyKind f, double alpha, double lambda, double gamma, double nu,
                              double tau) {
  ModelParams p;
  p.family = f;
  p.alpha = alpha;
  p.gamma = gamma;
  p.tau = tau;
  if (family_has_shapes(f)) {
    p.lambda = lambda;
    p.nu = nu;
  } else {
    p.lambda = std::numeric_limits<double>::quiet_NaN();
    p.nu = std::numeric_limits<double>::quiet_NaN();
  }
  p.validate();
  return p;
}

ModelParams ModelParams::unchecked(FamilyKind f, double alpha, double lambda, double gamma,
                                   double nu, double tau) {
  ModelParams p;
  p.family = f;
  p.alpha = alpha;
  p.gamma = gamma;
  p.tau = tau;
  if (family_has_shapes(f)) {
    p.lambda = lambda;
    p.nu = nu;
  }
  return p;
}

ModelParams ModelParams::exponential(double a, double g, double t) {
  return make(FamilyKind::Exponential, a, 0, g, 0, t);
}
ModelParams ModelParams::lomax(double a, double l, double g, double n, double t) {
  return make(FamilyKind::Lomax, a, l, g, n, t);
}
ModelParams ModelParams::weibull(double a, double l, double g, double n, double t) {
  return make(FamilyKind::Weibull, a, l, g, n, t);
}
ModelParams ModelParams::log_logistic(double a, double l, double g, double n, double t) {
  return make(FamilyKind::LogLogistic, a, l, g, n, t);
}
ModelParams ModelParams::half_cauchy(double a, double g, double t) {
  return make(FamilyKind::HalfCauchy, a, 0, g, 0, t);
}
ModelParams ModelParams::gamma_family(double a, double l, double g, double n, double t) {
  return make(FamilyKind::Gamma, a, l, g, n, t);
}

void ModelParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw domain_error("ModelParams: alpha must be > 0");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw domain_error("ModelParams: gamma must be > 0");
  if (!(tau >= 0.0 && tau <= 1.0)) throw domain_error("ModelParams: tau must lie in [0,1]");
  if (family_has_shapes(family)) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw domain_error("ModelParams: lambda must be > 0");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw domain_error("ModelParams: nu must be > 0");
  }
}

double marginal_survival_x(const ModelParams& p, double x) {
  require_positive(x, "x");
  return survival(x_marginal(p), x);
}

double marginal_survival_y(const ModelParams& p, double y) {
  require_positive(y, "y");
  return survival(y_marginal(p), y);
}

double marginal_cdf_x(const ModelParams& p, double x) {
  require_positive(x, "x");
  return cdf(x_marginal(p), x);
}

double marginal_cdf_y(const ModelParams& p, double y) {
  require_positive(y, "y");
  return cdf(y_marginal(p), y);
}

double marginal_density_x(const ModelParams& p, double x) {
  require_positive(x, "x");
  return std::exp(log_density(x_marginal(p), x));
}

double marginal_density_y(const ModelParams& p, double y) {
  require_positive(y, "y");
  return std::exp(log_density(y_marginal(p), y));
}

double log_marginal_density_x(const ModelParams& p, double x) {
  require_positive(x, "x");
  return log_density(x_marginal(p), x);
}

double log_marginal_density_y(const ModelParams& p, double y) {
  require_positive(y, "y");
  return log_density(y_marginal(p), y);
}

double marginal_quantile_x(const ModelParams& p, double u) {
  require_prob_open(u, "u");
  return quantile(x_marginal(p), u);
}

double marginal_quantile_y(const ModelParams& p, double u) {
  require_prob_open(u, "u");
  return quantile(y_marginal(p), u);
}

double hazard_x(const ModelParams& p, double x) {
  require_positive(x, "x");
  return hazard(x_marginal(p), x);
}

double cumulative_hazard_x(const ModelParams& p, double x) {
  if (!(x >= 0.0)) throw domain_error("cumulative_hazard_x: x must be >= 0");
  return cum_hazard(x_marginal(p), x);
}

double c_star(const ModelParams& p) {
  p.validate();
  switch (p.family) {
    case FamilyKind::Exponential:
    case FamilyKind::Lomax:
    case FamilyKind::HalfCauchy:
      return 1.0;
    case FamilyKind::Weibull:
    case FamilyKind::LogLogistic:
    case FamilyKind::Gamma:
      return 1.0 / p.nu;
  }
  throw domain_error("c_star: bad family");
}

double log_acceleration(const ModelParams& p, double x) {
  if (!(x >= 0.0)) throw domain_error("acceleration: x must be >= 0");
  const double cs = family_has_shapes(p.family) &&
                            (p.family == FamilyKind::Weibull || p.family == FamilyKind::LogLogistic ||
                             p.family == FamilyKind::Gamma)
                        ? 1.0 / p.nu
                        : 1.0;
  const double lb = std::log(p.gamma) + cs * cum_hazard(x_marginal(p), p.tau * x);
  if (lb > 709.0) throw overflow_error("acceleration: beta(x) overflows double range");
  return lb;
}

double acceleration(const ModelParams& p, double x) { return std::exp(log_acceleration(p, x)); }

double joint_survival(const ModelParams& p, JointPoint pt) {
  require_positive(pt.x, "x");
  require_positive(pt.y, "y");
  const double lb = log_acceleration(p, pt.x);
  const double t = std::exp(lb + std::log(pt.y));
  const double h = cum_hazard(x_marginal(p), pt.x) + cum_hazard(Marginal{p.family, 1.0, p.nu}, t);
  return std::exp(-h);
}

namespace {

// log of the bracket [(1-a) + b T] (with its family denominator), where the
// joint density factors as
//   f(x,y) = beta(x) f1(t) F0bar(x) h0(x) * bracket,  t = beta(x) y.
// a is the tau-scaled hazard ratio; Theorem-2-style bounds keep a <= 1 for
// tau in [0,1], so both summands are nonnegative and the log is safe.
double log_bracket(const ModelParams& p, double x, double t, double log_t) {
  const double tau = p.tau;
  switch (p.family) {
    case FamilyKind::Exponential:
      return logsumexp2(std::log(1.0 - tau), std::log(tau) + log_t);
    case FamilyKind::Lomax: {
      const double atx = p.alpha * tau * x;
      const double u = tau * (1.0 + p.alpha * x) / (1.0 + atx);
      const double l1 = std::log(1.0 - tau) - std::log1p(atx);
      const double l2 = std::log1p(u * p.nu) + log_t;
      return logsumexp2(l1, l2) - softplus(log_t);
    }
    case FamilyKind::Weibull: {
      const double ltl = p.lambda * std::log(tau);  // log tau^lambda
      const double l1 = std::log(-std::expm1(ltl));
      const double l2 = ltl + p.nu * log_t;
      return logsumexp2(l1, l2);
    }
    case FamilyKind::LogLogistic: {
      const double za = p.lambda * std::log(p.alpha * x);
      const double zat = p.lambda * std::log(p.alpha * tau * x);
      const double log_a = p.lambda * std::log(tau) + softplus(za) - softplus(zat);
      const double l1 = std::log(-std::expm1(log_a));
      const double l2 = softplus(log_a) + p.nu * log_t;
      return logsumexp2(l1, l2) - softplus(p.nu * log_t);
    }
    case FamilyKind::HalfCauchy: {
      double u = 0.0;
      if (tau > 0.0) {
        const double ax = p.alpha * x, atx = p.alpha * tau * x;
        u = tau * (1.0 + ax * ax) * std::atan(1.0 / ax) /
            ((1.0 + atx * atx) * std::atan(1.0 / atx));
      }
      const double l1 = std::log1p(-u);
      const double l2 = std::log1p(u) + 2.0 * log_t;
      return logsumexp2(l1, l2) - softplus(2.0 * log_t);
    }
    case FamilyKind::Gamma: {
      const double ax = p.alpha * x;
      double L;  // log of a = tau^lambda e^{alpha x (1-tau)} Q(l,ax)/Q(l,atx)
      if (tau > 0.0) {
        L = p.lambda * std::log(tau) + ax * (1.0 - tau) + log_regularized_gamma_q(p.lambda, ax) -
            log_regularized_gamma_q(p.lambda, tau * ax);
      } else {
        L = kNegInf;
      }
      const double l1 = std::log(-std::expm1(L));
      const double l2 = L - std::log(p.nu) + log_t;
      return logsumexp2(l1, l2);
    }
  }
  throw domain_error("log_bracket: bad family");
}

}  // namespace

double log_joint_density(const ModelParams& p, JointPoint pt) {
  require_positive(pt.x, "x");
  require_positive(pt.y, "y");
  const double lb = log_acceleration(p, pt.x);
  const double log_t = lb + std::log(pt.y);
  const double t = std::exp(log_t);

  const double lf1 = log_density(Marginal{p.family, 1.0, p.nu}, t, log_t);
  if (lf1 == kNegInf) return kNegInf;
  const double lF0 = -cum_hazard(x_marginal(p), pt.x);
  if (lF0 == kNegInf) return kNegInf;
  const double lh0 = std::log(hazard(x_marginal(p), pt.x));
  const double lbr = log_bracket(p, pt.x, t, log_t);
  return lb + lf1 + lF0 + lh0 + lbr;
}

double joint_density(const ModelParams& p, JointPoint pt) {
  const double lf = log_joint_density(p, pt);
  if (lf > 709.0) throw overflow_error("joint_density: value overflows double range");
  return std::exp(lf);
}

double log_likelihood(const ModelParams& p, const std::vector<JointPoint>& data) {
  double ll = 0.0;
  for (const JointPoint& pt : data) {
    const double l = log_joint_density(p, pt);
    if (l == kNegInf) return kNegInf;
    ll += l;
  }
  return ll;
}

double conditional_cdf_y_given_x(const ModelParams& p, double x, double y) {
  if (p.family != FamilyKind::Exponential)
    throw unsupported_family_error("conditional_cdf_y_given_x: exponential family only");
  require_positive(x, "x");
  require_positive(y, "y");
  const double c = p.gamma * std::exp(p.alpha * p.tau * x);
  const double cy = c * y;
  return -std::expm1(-cy) - p.tau * cy * std::exp(-cy);
}

}  // namespace afc
