#include "afc/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "afc/moments.hpp"
#include "afc/optim.hpp"
#include "afc/rng.hpp"
#include "afc/sampling.hpp"
#include "afc/special.hpp"

namespace afc {

namespace {

constexpr double kRateShapeLo = 1e-8;
constexpr double kRateShapeHi = 1e8;
constexpr double kTauLo = 1e-8;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Weibull CV^2 identity Gamma(1+2/k)/Gamma(1+1/k)^2 - 1, decreasing in k.
double weibull_cv2(double k) {
  return std::expm1(ln_gamma(1.0 + 2.0 / k) - 2.0 * ln_gamma(1.0 + 1.0 / k));
}

// Log-logistic CV^2, defined for k > 2, decreasing in k.
double loglogistic_cv2(double k) {
  const double pi = 3.14159265358979323846;
  const double b = pi / (k * std::sin(pi / k));
  const double m2 = 2.0 * pi / (k * std::sin(2.0 * pi / k));
  return m2 / (b * b) - 1.0;
}

// Bisection for a decreasing g on [lo, hi] with g(k) = target.
double solve_decreasing(double (*g)(double), double lo, double hi, double target,
                        const char* what) {
  if (!(g(lo) >= target && g(hi) <= target))
    throw moment_condition_error(std::string(what) +
                                 ": sample CV^2 outside the range attainable by the family");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > target) lo = mid; else hi = mid;
    if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

void apply_tau_clamp(double tau_raw, ModelParams* p, FitResult* fit) {
  if (tau_raw < 0.0) {
    p->tau = 0.0;
    fit->boundary_flags.insert(BoundaryFlag::TauAtZero);
  } else if (tau_raw > 1.0) {
    p->tau = 1.0;
    fit->boundary_flags.insert(BoundaryFlag::TauAtOne);
  } else {
    p->tau = tau_raw;
  }
}

void solve_tau_from_cov(ModelParams* p, double s12, FitResult* fit) {
  int oor = 0;
  const double tau = tau_from_covariance(*p, s12, &oor);
  p->tau = tau;
  if (oor > 0 && s12 > 0.0) fit->boundary_flags.insert(BoundaryFlag::TauAtZero);
  if (oor < 0) fit->boundary_flags.insert(BoundaryFlag::TauAtOne);
}

}  // namespace

SampleMoments sample_moments(const BivariateSample& data) {
  data.validate();
  const long n = static_cast<long>(data.pairs.size());
  if (n < 2) throw domain_error("sample_moments: need at least 2 observations");
  SampleMoments m;
  m.n = n;
  for (const JointPoint& pt : data.pairs) {
    m.m1 += pt.x;
    m.m2 += pt.y;
  }
  m.m1 /= n;
  m.m2 /= n;
  for (const JointPoint& pt : data.pairs) {
    const double dx = pt.x - m.m1, dy = pt.y - m.m2;
    m.s1 += dx * dx;
    m.s2 += dy * dy;
    m.s12 += dx * dy;
  }
  m.s1 /= n;
  m.s2 /= n;
  m.s12 /= n;
  return m;
}

double sample_pearson(const BivariateSample& data) {
  const SampleMoments m = sample_moments(data);
  if (m.s1 <= 0.0 || m.s2 <= 0.0) throw moment_condition_error("sample_pearson: degenerate column");
  return m.s12 / std::sqrt(m.s1 * m.s2);
}

const char* boundary_flag_name(BoundaryFlag f) {
  switch (f) {
    case BoundaryFlag::TauAtZero: return "tau-at-zero";
    case BoundaryFlag::TauAtOne: return "tau-at-one";
    case BoundaryFlag::ShapeDiverging: return "shape-diverging";
    case BoundaryFlag::RateCollapsing: return "rate-collapsing";
  }
  return "?";
}

const char* fit_method_name(FitMethod m) { return m == FitMethod::MME ? "mme" : "mle"; }

FitMethod fit_method_from_name(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "mme") return FitMethod::MME;
  if (s == "mle") return FitMethod::MLE;
  throw domain_error("unknown fit method: " + s + " (expected mme or mle)");
}

FitResult mme(FamilyKind family, const BivariateSample& data) {
  const SampleMoments m = sample_moments(data);
  FitResult fit;
  fit.method = FitMethod::MME;
  fit.converged = true;

  switch (family) {
    case FamilyKind::Exponential: {
      ModelParams p = ModelParams::unchecked(family, 1.0 / m.m1, 0, 1.0 / m.m2, 0, 0.0);
      double tau_raw;
      if (m.s12 == 0.0) {
        tau_raw = 0.0;
      } else if (m.m1 * m.m2 + m.s12 <= 0.0) {
        tau_raw = 2.0;  // past the rho = -1/2 limit
      } else {
        tau_raw = -m.s12 / (m.m1 * m.m2 + m.s12);
      }
      apply_tau_clamp(tau_raw, &p, &fit);
      p.validate();
      fit.params = p;
      return fit;
    }
    case FamilyKind::Lomax: {
      if (!(m.s1 > m.m1 * m.m1 && m.s2 > m.m2 * m.m2))
        throw moment_condition_error(
            "mme: Lomax moment condition failed (requires S1 > M1^2 and S2 > M2^2)");
      const double lambda = 2.0 * m.s1 / (m.s1 - m.m1 * m.m1);
      const double nu = 2.0 * m.s2 / (m.s2 - m.m2 * m.m2);
      const double alpha = 1.0 / (m.m1 * (lambda - 1.0));
      const double gam = 1.0 / (m.m2 * (nu - 1.0));
      ModelParams p = ModelParams::make(family, alpha, lambda, gam, nu, 0.0);
      solve_tau_from_cov(&p, m.s12, &fit);
      fit.params = p;
      return fit;
    }
    case FamilyKind::Weibull: {
      const double cv2x = m.s1 / (m.m1 * m.m1);
      const double cv2y = m.s2 / (m.m2 * m.m2);
      const double lambda = solve_decreasing(&weibull_cv2, 0.05, 50.0, cv2x, "mme[weibull]");
      const double nu = solve_decreasing(&weibull_cv2, 0.05, 50.0, cv2y, "mme[weibull]");
      const double alpha = std::exp(ln_gamma(1.0 + 1.0 / lambda)) / m.m1;
      const double gam = std::exp(ln_gamma(1.0 + 1.0 / nu)) / m.m2;
      ModelParams p = ModelParams::make(family, alpha, lambda, gam, nu, 0.0);
      solve_tau_from_cov(&p, m.s12, &fit);
      fit.params = p;
      return fit;
    }
    case FamilyKind::LogLogistic: {
      const double pi = 3.14159265358979323846;
      const double cv2x = m.s1 / (m.m1 * m.m1);
      const double cv2y = m.s2 / (m.m2 * m.m2);
      const double lambda =
          solve_decreasing(&loglogistic_cv2, 2.0 + 1e-6, 500.0, cv2x, "mme[log-logistic]");
      const double nu =
          solve_decreasing(&loglogistic_cv2, 2.0 + 1e-6, 500.0, cv2y, "mme[log-logistic]");
      const double alpha = pi / (lambda * std::sin(pi / lambda)) / m.m1;
      const double gam = pi / (nu * std::sin(pi / nu)) / m.m2;
      ModelParams p = ModelParams::make(family, alpha, lambda, gam, nu, 0.0);
      solve_tau_from_cov(&p, m.s12, &fit);
      fit.params = p;
      return fit;
    }
    default:
      throw unsupported_family_error(std::string("mme: not applicable to ") + family_name(family) +
                                     " (no closed moments in the model)");
  }
}

std::vector<std::string> active_parameter_names(FamilyKind f) {
  if (family_has_shapes(f)) return {"alpha", "lambda", "gamma", "nu", "tau"};
  return {"alpha", "gamma", "tau"};
}

std::vector<double> active_parameters(const ModelParams& p) {
  if (family_has_shapes(p.family)) return {p.alpha, p.lambda, p.gamma, p.nu, p.tau};
  return {p.alpha, p.gamma, p.tau};
}

namespace {

ModelParams params_from_active(FamilyKind f, const std::vector<double>& v) {
  if (family_has_shapes(f)) return ModelParams::unchecked(f, v[0], v[1], v[2], v[3], v[4]);
  return ModelParams::unchecked(f, v[0], 0, v[1], 0, v[2]);
}

ModelParams default_init(FamilyKind family, const BivariateSample& data, const SampleMoments& m) {
  switch (family) {
    case FamilyKind::Lomax: {
      const double lambda = 3.0, nu = 3.0;
      return ModelParams::lomax(1.0 / (m.m1 * (lambda - 1.0)), lambda,
                                1.0 / (m.m2 * (nu - 1.0)), nu, 0.5);
    }
    case FamilyKind::Weibull: {
      const double lambda = 2.0, nu = 2.0;
      return ModelParams::weibull(std::exp(ln_gamma(1.5)) / m.m1, lambda,
                                  std::exp(ln_gamma(1.5)) / m.m2, nu, 0.5);
    }
    case FamilyKind::LogLogistic: {
      const double pi = 3.14159265358979323846;
      const double lambda = 3.0, nu = 3.0;
      const double b = pi / (3.0 * std::sin(pi / 3.0));
      return ModelParams::log_logistic(b / m.m1, lambda, b / m.m2, nu, 0.5);
    }
    case FamilyKind::HalfCauchy: {
      std::vector<double> xs, ys;
      xs.reserve(data.pairs.size());
      ys.reserve(data.pairs.size());
      for (const JointPoint& pt : data.pairs) {
        xs.push_back(pt.x);
        ys.push_back(pt.y);
      }
      return ModelParams::half_cauchy(1.0 / median_of(xs), 1.0 / median_of(ys), 0.5);
    }
    case FamilyKind::Gamma: {
      const double lx = std::max(m.m1 * m.m1 / m.s1, 1e-3);
      const double ly = std::max(m.m2 * m.m2 / m.s2, 1e-3);
      return ModelParams::gamma_family(std::max(m.m1 / m.s1, 1e-6), lx,
                                       std::max(m.m2 / m.s2, 1e-6), ly, 0.5);
    }
    default:
      return ModelParams::exponential(1.0 / m.m1, 1.0 / m.m2, 0.5);
  }
}

bool near_bound(double v, double bound) {
  return std::fabs(v - bound) <= 1e-6 * std::max(1.0, std::fabs(bound));
}

}  // namespace

FitResult mle(FamilyKind family, const BivariateSample& data,
              const std::optional<ModelParams>& init) {
  data.validate();
  if (data.pairs.empty()) throw domain_error("mle: empty sample");
  const SampleMoments m = sample_moments(data);

  ModelParams start = ModelParams::exponential(1, 1, 0.5);
  if (init) {
    if (init->family != family) throw domain_error("mle: init family mismatch");
    init->validate();
    start = *init;
  } else {
    bool have = false;
    if (family == FamilyKind::Exponential || family == FamilyKind::Lomax ||
        family == FamilyKind::Weibull || family == FamilyKind::LogLogistic) {
      try {
        start = mme(family, data).params;
        have = true;
      } catch (const moment_condition_error&) {
        have = false;
      }
    }
    if (!have) start = default_init(family, data, m);
    // keep tau off the boundary so the first gradient sees both sides
    start.tau = std::min(std::max(start.tau, 0.01), 0.99);
  }

  std::vector<double> x0 = active_parameters(start);
  const std::size_t k = x0.size();
  std::vector<double> lo(k, kRateShapeLo), hi(k, kRateShapeHi);
  lo.back() = kTauLo;
  hi.back() = 1.0;

  const auto objective = [&](const std::vector<double>& v) {
    return -log_likelihood(params_from_active(family, v), data.pairs);
  };

  OptimResult r = minimize_box(objective, x0, lo, hi, {});

  FitResult fit;
  fit.method = FitMethod::MLE;
  fit.params = params_from_active(family, r.x);
  fit.params.validate();
  fit.log_lik = -r.f;
  fit.converged = r.converged;
  fit.iterations = r.iterations;
  fit.proj_grad_norm = r.proj_grad_norm;

  const std::vector<std::string> names = active_parameter_names(family);
  for (std::size_t i = 0; i < k; ++i) {
    const bool at_lo = near_bound(r.x[i], lo[i]);
    const bool at_hi = near_bound(r.x[i], hi[i]);
    if (!at_lo && !at_hi) continue;
    if (names[i] == "tau") {
      fit.boundary_flags.insert(at_hi ? BoundaryFlag::TauAtOne : BoundaryFlag::TauAtZero);
    } else if (names[i] == "lambda" || names[i] == "nu") {
      fit.boundary_flags.insert(BoundaryFlag::ShapeDiverging);
    } else {
      fit.boundary_flags.insert(BoundaryFlag::RateCollapsing);
    }
  }
  fit.aic = aic_value(fit);
  return fit;
}

double aic_value(const FitResult& fit) {
  if (!fit.log_lik) throw domain_error("aic_value: fit carries no log-likelihood");
  return 2.0 * family_parameter_count(fit.params.family) - 2.0 * *fit.log_lik;
}

ReplicationSummary replication_study(FamilyKind family, const ModelParams& truth, long n, int reps,
                                     FitMethod method, std::uint64_t seed, int threads) {
  truth.validate();
  if (truth.family != family) throw domain_error("replication_study: family mismatch");
  if (reps < 2) throw domain_error("replication_study: need reps >= 2");
  if (n < 2) throw domain_error("replication_study: need n >= 2");
  if (method == FitMethod::MME &&
      (family == FamilyKind::HalfCauchy || family == FamilyKind::Gamma))
    throw unsupported_family_error(std::string("replication_study: no MME for ") +
                                   family_name(family));

  ReplicationSummary out;
  out.family = family;
  out.method = method;
  out.n = n;
  out.requested_reps = reps;

  CopulaConfig ccfg;
  const bool exact = family == FamilyKind::Exponential;
  const bool use_copula = !exact && method == FitMethod::MME;
  if (use_copula) ccfg.rho_latent = calibrate_latent_correlation(truth, ccfg);
  out.data_provenance = exact ? Provenance::InverseTransform
                              : (use_copula ? Provenance::Copula : Provenance::MetropolisHastings);

  const std::vector<std::string> names = active_parameter_names(family);
  const std::size_t k = names.size();
  std::vector<std::vector<double>> estimates(reps);
  std::vector<double> pearsons(reps, std::numeric_limits<double>::quiet_NaN());
  std::atomic<int> next{0};
  std::atomic<int> failures{0};

  const auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= reps) return;
      const std::uint64_t child = Rng::derive_seed(seed, static_cast<std::uint64_t>(r));
      try {
        BivariateSample data;
        if (exact) {
          data = sample_exponential_inverse_transform(truth, n, child);
        } else if (use_copula) {
          data = sample_copula(truth, n, ccfg, child);
        } else {
          MhConfig mcfg;
          mcfg.target_n = n;
          data = sample_mh(truth, mcfg, child);
        }
        pearsons[r] = sample_pearson(data);
        const FitResult fit =
            method == FitMethod::MME ? mme(family, data) : mle(family, data);
        estimates[r] = active_parameters(fit.params);
      } catch (const std::exception&) {
        failures.fetch_add(1);
      }
    }
  };

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min(nthreads, reps));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  const std::vector<double> truth_v = active_parameters(truth);
  std::vector<double> mean(k, 0.0), sd(k, 0.0);
  int completed = 0;
  double pc_sum = 0.0;
  for (int r = 0; r < reps; ++r) {
    if (estimates[r].empty()) continue;
    ++completed;
    pc_sum += pearsons[r];
    for (std::size_t i = 0; i < k; ++i) mean[i] += estimates[r][i];
  }
  if (completed < 2) throw convergence_error("replication_study: fewer than 2 replicates succeeded", 0.0);
  for (std::size_t i = 0; i < k; ++i) mean[i] /= completed;
  for (int r = 0; r < reps; ++r) {
    if (estimates[r].empty()) continue;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = estimates[r][i] - mean[i];
      sd[i] += d * d;
    }
  }
  for (std::size_t i = 0; i < k; ++i) sd[i] = std::sqrt(sd[i] / (completed - 1));

  out.completed_reps = completed;
  out.mean_pearson = pc_sum / completed;
  for (std::size_t i = 0; i < k; ++i) {
    ReplicationRow row;
    row.parameter = names[i];
    row.truth = truth_v[i];
    row.mean_estimate = mean[i];
    row.se = sd[i];
    row.ci_lo = mean[i] - 1.959963984540054 * sd[i];
    row.ci_hi = mean[i] + 1.959963984540054 * sd[i];
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace afc
