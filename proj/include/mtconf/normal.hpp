#pragma once

namespace mtconf {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

/// Standard normal density.
double normal_pdf(double x);

/// Density of N(mean, sd^2).
double normal_pdf(double x, double mean, double sd);

/// Standard normal CDF, computed through erfc so both tails keep full relative precision.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x).
double normal_sf(double x);

/// Two-sided p-value 2(1 - Phi(|t|)) of a Wald statistic against N(0,1).
/// Throws InvalidArgument for non-finite t.
double normal_two_sided_p(double t);

/// Standard normal quantile. Acklam's rational approximation polished by one Halley step,
/// accurate to ~1e-15 on (0, 1).
double normal_quantile(double p);

}  // namespace mtconf
