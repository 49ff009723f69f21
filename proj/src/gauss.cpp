#include "pandora/gauss.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pandora/errors.hpp"

namespace pandora {

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362105;

// Beyond this point the direct ratio sf/pdf loses relative accuracy to
// underflow, so the continued fraction takes over.
constexpr double kContinuedFractionStart = 8.0;

// Denominator t of R(x) = 1/t for the Mills continued fraction
// R(x) = 1/(x + 1/(x + 2/(x + 3/(x + ...)))), evaluated bottom-up.
double mills_denominator(double x, double* tail) {
  double t = x;
  for (int k = 100; k >= 2; --k) t = x + k / t;
  if (tail != nullptr) *tail = 1.0 / t;
  return x + 1.0 / t;
}

}  // namespace

double GaussianSpec::stddev() const { return std::sqrt(variance); }

void GaussianSpec::validate() const {
  if (!std::isfinite(mean) || !std::isfinite(variance)) {
    throw DomainError("GaussianSpec: mean and variance must be finite");
  }
  if (variance < 0.0) {
    throw DomainError("GaussianSpec: variance must be >= 0, got " +
                      std::to_string(variance));
  }
}

double std_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_std_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double std_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double mills_ratio(double x) {
  if (x < kContinuedFractionStart) return std_sf(x) / std_pdf(x);
  return 1.0 / mills_denominator(x, nullptr);
}

double unit_call(double x) {
  if (x < kContinuedFractionStart) return std_pdf(x) - x * std_sf(x);
  // phi(x) * (1 - x R(x)) with 1 - x R(x) = g / t, g = t - x.
  double g = 0.0;
  const double t = mills_denominator(x, &g);
  return std_pdf(x) * g / t;
}

double gaussian_call(double mu, double variance, double strike) {
  if (variance <= 0.0) return std::max(mu - strike, 0.0);
  const double s = std::sqrt(variance);
  return s * unit_call((strike - mu) / s);
}

double truncated_mean_above(double mu, double variance, double threshold) {
  if (!(variance > 0.0)) {
    throw DomainError("truncated_mean_above: variance must be > 0");
  }
  const double s = std::sqrt(variance);
  const double d = (threshold - mu) / s;
  return mu + s / mills_ratio(d);
}

// Acklam's rational approximation.
double std_quantile_approx(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double std_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("std_quantile: probability outside [0, 1]");
  }
  double x = std_quantile_approx(p);
  // Two Halley steps; the error term uses whichever tail is small so the
  // residual keeps relative precision.
  for (int i = 0; i < 2; ++i) {
    const double e = (x <= 0.0) ? std_cdf(x) - p : (1.0 - p) - std_sf(x);
    const double u = e / std_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

}  // namespace pandora
