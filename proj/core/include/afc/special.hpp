#pragma once

#include "afc/accuracy.hpp"

namespace afc {

// log Gamma(x) for x > 0, Lanczos approximation.
// Relative error <= 1e-13 on [1e-3, 1e3].
double ln_gamma(double x);

// log |Gamma(x)| for any non-pole real x; *sign receives the sign of Gamma(x).
double ln_gamma_signed(double x, int* sign);

double digamma(double x);

// Upper incomplete gamma Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt, s > 0, x >= 0.
double upper_incomplete_gamma(double s, double x, const Accuracy& acc = {});

// Lower incomplete gamma gamma*(s, x) = Gamma(s) - Gamma(s, x).
double lower_incomplete_gamma(double s, double x, const Accuracy& acc = {});

// Regularized P(s,x) = gamma*(s,x)/Gamma(s) and Q(s,x) = Gamma(s,x)/Gamma(s).
double regularized_gamma_p(double s, double x, const Accuracy& acc = {});
double regularized_gamma_q(double s, double x, const Accuracy& acc = {});

// log Q(s,x); stays finite deep in the tail where Q underflows.
double log_regularized_gamma_q(double s, double x, const Accuracy& acc = {});

// Solves P(s, x) = p for x, p in [0, 1).
double inverse_regularized_gamma_p(double s, double p, const Accuracy& acc = {});

// Gauss hypergeometric 2F1(a, b; c; z) on z in [0, 1), c > 0.
// Direct series away from 1; z -> 1-z connection formula (Taylor-stepped
// continuation when c-a-b sits near an integer) keeps term counts bounded
// as z -> 1.
double gauss_2f1(double a, double b, double c, double z, const Accuracy& acc = {});

// Lower branch W_{-1}: solves W e^W = x with W <= -1, for x in [-1/e, 0).
double lambert_w_lower(double x, const Accuracy& acc = {});

// W_{-1} given log(-x); usable when -x underflows. Requires log(-x) <= -2.
double lambert_w_lower_from_log(double log_neg_x, const Accuracy& acc = {});

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double regularized_beta(double a, double b, double x, const Accuracy& acc = {});

// Student-t distribution with v > 0 degrees of freedom.
double student_t_cdf(double v, double x, const Accuracy& acc = {});
double student_t_quantile(double v, double p, const Accuracy& acc = {});
double student_t_log_pdf(double v, double x);

// Standard normal quantile (Acklam rational approximation + one refinement).
double normal_quantile(double p);

}  // namespace afc
