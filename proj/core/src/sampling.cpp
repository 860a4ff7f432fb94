#include "afc/sampling.hpp"

#include <cmath>
#include <vector>

#include "afc/moments.hpp"
#include "afc/quadrature.hpp"
#include "afc/special.hpp"

namespace afc {

namespace {

constexpr double kPi = 3.14159265358979323846;

double quantile_x_u(const ModelParams& p, double u) { return marginal_quantile_x(p, u); }
double quantile_y_u(const ModelParams& p, double u) { return marginal_quantile_y(p, u); }

// One draw from a marginal. Closed-form quantile transforms except the gamma
// family, which uses Marsaglia-Tsang.
double draw_x(const ModelParams& p, Rng& rng) {
  if (p.family == FamilyKind::Gamma) return rng.gamma(p.lambda) / p.alpha;
  return quantile_x_u(p, rng.uniform());
}

double draw_y(const ModelParams& p, Rng& rng) {
  if (p.family == FamilyKind::Gamma) return rng.gamma(p.nu) / p.gamma;
  return quantile_y_u(p, rng.uniform());
}

}  // namespace

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::InverseTransform: return "inverse-transform";
    case Provenance::Copula: return "copula";
    case Provenance::MetropolisHastings: return "metropolis-hastings";
    case Provenance::External: return "external";
  }
  return "?";
}

void BivariateSample::validate() const {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].x > 0.0) || !(pairs[i].y > 0.0) || !std::isfinite(pairs[i].x) ||
        !std::isfinite(pairs[i].y))
      throw domain_error("BivariateSample: coordinates must be positive and finite (row " +
                         std::to_string(i) + ")");
  }
}

void CopulaConfig::validate() const {
  if (!(v_c > 2.0)) throw domain_error("CopulaConfig: v_c must be > 2");
  if (!(rho_latent > -1.0 && rho_latent <= 0.0))
    throw domain_error("CopulaConfig: rho_latent must lie in (-1, 0]");
  if (calibration_nodes < 2) throw domain_error("CopulaConfig: calibration_nodes must be >= 2");
}

void MhConfig::validate() const {
  if (burn_in < 0) throw domain_error("MhConfig: burn_in must be >= 0");
  if (thin < 1) throw domain_error("MhConfig: thin must be >= 1");
  if (target_n < 1) throw domain_error("MhConfig: target_n must be >= 1");
}

BivariateSample sample_exponential_inverse_transform(const ModelParams& p, long n,
                                                     std::uint64_t seed) {
  p.validate();
  if (p.family != FamilyKind::Exponential)
    throw unsupported_family_error("sample_exponential_inverse_transform: exponential family only");
  if (n < 1) throw domain_error("sample size must be >= 1");

  BivariateSample out;
  out.provenance = Provenance::InverseTransform;
  out.pairs.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  const double tau = p.tau;
  for (long i = 0; i < n; ++i) {
    const double x = -std::log1p(-rng.uniform()) / p.alpha;
    double y;
    if (tau == 0.0) {
      y = -std::log1p(-rng.uniform()) / p.gamma;
    } else {
      const double u = rng.uniform();
      // Y = -(tau W(z) + 1) / (gamma tau e^{alpha tau x}),
      // z = (u-1) e^{-1/tau} / tau, W the lower branch.
      const double log_neg_z = std::log1p(-u) - 1.0 / tau - std::log(tau);
      double w;
      if (log_neg_z > -700.0) {
        w = lambert_w_lower(-std::exp(log_neg_z));
      } else {
        w = lambert_w_lower_from_log(log_neg_z);
      }
      y = -(tau * w + 1.0) / (p.gamma * tau * std::exp(p.alpha * tau * x));
      if (!(y > 0.0)) y = 1e-300;  // w == -1/tau only at the rounding limit of u -> 0
    }
    out.pairs.push_back({x, y});
  }
  return out;
}

namespace {

double bivariate_t_log_pdf(double v, double rho, double z1, double z2) {
  const double om = 1.0 - rho * rho;
  const double q = (z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) / om;
  return ln_gamma(0.5 * (v + 2.0)) - ln_gamma(0.5 * v) - std::log(v * kPi) - 0.5 * std::log(om) -
         0.5 * (v + 2.0) * std::log1p(q / v);
}

struct CalibrationGrid {
  std::vector<double> w;       // scaled GL weights
  std::vector<double> z;      // t quantiles at the nodes
  std::vector<double> logf1;  // univariate t log-density at z
  std::vector<double> qx, qy; // marginal quantiles at the nodes
  double mean_x_hat = 0.0, mean_y_hat = 0.0;

  // Copula covariance at latent correlation rho under the same quadrature.
  double covariance(double v, double rho) const {
    const std::size_t n = w.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double c = std::exp(bivariate_t_log_pdf(v, rho, z[i], z[j]) - logf1[i] - logf1[j]);
        row += w[j] * qy[j] * c;
      }
      s += w[i] * qx[i] * row;
    }
    return s - mean_x_hat * mean_y_hat;
  }
};

CalibrationGrid make_grid(const ModelParams& p, const CopulaConfig& cfg) {
  constexpr double eps = 1e-6;
  const GaussLegendreRule rule = gauss_legendre(cfg.calibration_nodes);
  CalibrationGrid g;
  const std::size_t n = rule.nodes.size();
  g.w.resize(n);
  g.z.resize(n);
  g.logf1.resize(n);
  g.qx.resize(n);
  g.qy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = eps + (1.0 - 2.0 * eps) * 0.5 * (rule.nodes[i] + 1.0);
    g.w[i] = 0.5 * (1.0 - 2.0 * eps) * rule.weights[i];
    g.z[i] = student_t_quantile(cfg.v_c, u);
    g.logf1[i] = student_t_log_pdf(cfg.v_c, g.z[i]);
    g.qx[i] = quantile_x_u(p, u);
    g.qy[i] = quantile_y_u(p, u);
    g.mean_x_hat += g.w[i] * g.qx[i];
    g.mean_y_hat += g.w[i] * g.qy[i];
  }
  return g;
}

}  // namespace

double calibrate_latent_correlation(const ModelParams& p, const CopulaConfig& cfg) {
  p.validate();
  CopulaConfig c = cfg;
  c.rho_latent = 0.0;
  c.validate();
  if (p.family == FamilyKind::HalfCauchy || p.family == FamilyKind::Gamma)
    throw unsupported_family_error(
        std::string("calibrate_latent_correlation: no closed-form correlation for ") +
        family_name(p.family));

  const MomentSummary m = theoretical_moments(p);  // enforces shape conditions
  if (m.rho == 0.0) return 0.0;
  const double cov_target = m.cov;

  const CalibrationGrid grid = make_grid(p, cfg);
  const double sd = std::sqrt(m.var_x * m.var_y);

  double lo = -0.999, hi = 0.0;
  if (grid.covariance(cfg.v_c, lo) - cov_target > 0.0)
    throw convergence_error(
        "calibrate_latent_correlation: target correlation below what the copula attains at v_c",
        (grid.covariance(cfg.v_c, lo) - cov_target) / sd);
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double cov = grid.covariance(cfg.v_c, mid);
    if (std::fabs(cov - cov_target) <= 1e-4 * sd && hi - lo < 1e-5) return mid;
    if (cov > cov_target) hi = mid; else lo = mid;
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

BivariateSample sample_copula(const ModelParams& p, long n, const CopulaConfig& cfg,
                              std::uint64_t seed) {
  p.validate();
  cfg.validate();
  if (p.family == FamilyKind::HalfCauchy || p.family == FamilyKind::Gamma)
    throw unsupported_family_error(std::string("sample_copula: copula path disabled for ") +
                                   family_name(p.family) + " (no closed-form correlation target)");
  if (n < 1) throw domain_error("sample size must be >= 1");

  BivariateSample out;
  out.provenance = Provenance::Copula;
  out.pairs.reserve(static_cast<std::size_t>(n));
  Rng rng(seed);
  const double rho = cfg.rho_latent;
  const double mix = std::sqrt(1.0 - rho * rho);
  constexpr double u_clip = 1e-14;
  for (long i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rho * z1 + mix * rng.normal();
    const double scale = std::sqrt(cfg.v_c / rng.chi_square(cfg.v_c));
    double u = student_t_cdf(cfg.v_c, z1 * scale);
    double v = student_t_cdf(cfg.v_c, z2 * scale);
    u = std::min(std::max(u, u_clip), 1.0 - u_clip);
    v = std::min(std::max(v, u_clip), 1.0 - u_clip);
    out.pairs.push_back({quantile_x_u(p, u), quantile_y_u(p, v)});
  }
  return out;
}

namespace {

// log dependence factor log f(x,y) - log fX(x) - log fY(y).
double log_dependence(const ModelParams& p, JointPoint pt) {
  return log_joint_density(p, pt) - log_marginal_density_x(p, pt.x) -
         log_marginal_density_y(p, pt.y);
}

}  // namespace

double mh_acceptance_log_ratio(const ModelParams& p, JointPoint current, JointPoint proposal) {
  if (p.tau == 0.0) return 0.0;  // identical factorizations
  const double d_prop = log_dependence(p, proposal);
  const double d_cur = log_dependence(p, current);
  if (d_prop == -std::numeric_limits<double>::infinity()) return -std::numeric_limits<double>::infinity();
  return std::min(d_prop - d_cur, 0.0);
}

BivariateSample sample_mh(const ModelParams& p, const MhConfig& cfg, std::uint64_t seed,
                          MhDiagnostics* diag) {
  p.validate();
  cfg.validate();
  BivariateSample out;
  out.provenance = Provenance::MetropolisHastings;
  out.pairs.reserve(static_cast<std::size_t>(cfg.target_n));
  Rng rng(seed);

  JointPoint cur{draw_x(p, rng), draw_y(p, rng)};
  double d_cur = p.tau == 0.0 ? 0.0 : log_dependence(p, cur);
  long accepted = 0, proposals = 0;
  long step = 0;
  while (static_cast<long>(out.pairs.size()) < cfg.target_n) {
    const JointPoint prop{draw_x(p, rng), draw_y(p, rng)};
    const double d_prop = p.tau == 0.0 ? 0.0 : log_dependence(p, prop);
    const double log_alpha = std::min(d_prop - d_cur, 0.0);
    ++proposals;
    const double u = rng.uniform();
    if (std::log(u) < log_alpha) {
      cur = prop;
      d_cur = d_prop;
      ++accepted;
    }
    ++step;
    if (step > cfg.burn_in && (step - cfg.burn_in - 1) % cfg.thin == 0) out.pairs.push_back(cur);
  }
  if (diag) {
    diag->proposals = proposals;
    diag->acceptance_rate = proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
    diag->low_acceptance_warning = diag->acceptance_rate < 0.01;
  }
  return out;
}

}  // namespace afc
