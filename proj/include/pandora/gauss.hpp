#pragma once

// Standard-Gaussian kernels and truncated moments.
//
// Every upper-tail quantity is evaluated through erfc so that 1 - Phi(x)
// keeps its relative accuracy far into the tail.

namespace pandora {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

struct GaussianSpec {
  double mean = 0.0;
  double variance = 1.0;

  double stddev() const;
  bool degenerate() const { return variance == 0.0; }

  // Throws DomainError on negative or non-finite parameters.
  void validate() const;
};

double std_pdf(double x);
double log_std_pdf(double x);
double std_cdf(double x);

/// Upper tail 1 - Phi(x), never formed by subtraction.
double std_sf(double x);

/// Inverse of std_cdf on (0, 1), refined to full double precision.
double std_quantile(double p);

/// Rational approximation of std_quantile (relative error below 1.2e-9).
/// Used where speed matters more than the last digits, e.g. when turning
/// uniforms into Gaussian draws.
double std_quantile_approx(double p);

/// Mills ratio (1 - Phi(x)) / phi(x).
double mills_ratio(double x);

/// E[(Z - x)^+] for Z ~ N(0, 1).
double unit_call(double x);

/// E[max(V - strike, 0)] for V ~ N(mu, variance); variance 0 is allowed.
double gaussian_call(double mu, double variance, double strike);

/// E[V | V > threshold] for V ~ N(mu, variance), variance > 0.
double truncated_mean_above(double mu, double variance, double threshold);

}  // namespace pandora
