#pragma once

#include <cstdint>
#include <optional>

#include "afc/rng.hpp"
#include "afc/sample.hpp"

namespace afc {

struct CopulaConfig {
  double v_c = 5.0;            // copula degrees of freedom
  double rho_latent = 0.0;     // calibrated latent correlation, in (-1, 0]
  int calibration_nodes = 64;  // Gauss-Legendre nodes per axis

  void validate() const;
};

struct MhConfig {
  long burn_in = 10000;
  long thin = 5;
  long target_n = 0;

  void validate() const;
};

struct MhDiagnostics {
  double acceptance_rate = 0.0;
  long proposals = 0;
  bool low_acceptance_warning = false;  // acceptance < 1%
};

// Exponential family only: X by quantile transform, Y | X by the lower-branch
// Lambert-W inversion of the conditional CDF. tau = 0 falls back to
// independent exponential draws.
BivariateSample sample_exponential_inverse_transform(const ModelParams& p, long n,
                                                     std::uint64_t seed);

// Solves for the latent t-copula correlation that reproduces the model's
// Pearson correlation, by bisection over a tensor Gauss-Legendre evaluation
// of the copula covariance integral on [eps, 1-eps]^2, eps = 1e-6.
// Families with closed-form rho only.
double calibrate_latent_correlation(const ModelParams& p, const CopulaConfig& cfg);

// Bivariate-t copula pairs mapped through the marginal quantiles. Marginals
// are exact by construction; cfg.rho_latent must already be calibrated.
BivariateSample sample_copula(const ModelParams& p, long n, const CopulaConfig& cfg,
                              std::uint64_t seed);

// log acceptance probability of an independence-proposal MH step:
// min{ [log f(x*,y*) - log fX(x*) - log fY(y*)] - [same at current], 0 }.
double mh_acceptance_log_ratio(const ModelParams& p, JointPoint current, JointPoint proposal);

// Metropolis-Hastings chain with independence proposals q = fX fY; discards
// burn_in states then keeps every thin-th state until target_n pairs.
BivariateSample sample_mh(const ModelParams& p, const MhConfig& cfg, std::uint64_t seed,
                          MhDiagnostics* diag = nullptr);

}  // namespace afc
