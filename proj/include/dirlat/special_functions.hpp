#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dirlat {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// ln Gamma(x) for x > 0.
inline double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma_fn: x must be > 0");
  return std::lgamma(x);
}

/// Digamma psi(x) = d/dx ln Gamma(x), x > 0. Recurrence up to x >= 10,
/// then the asymptotic Bernoulli series (error well below 1e-13 there).
inline double digamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("digamma_fn: x must be > 0");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // psi(x) ~ ln x - 1/(2x) - sum B_2n / (2n x^2n)
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0))))));
  return result + std::log(x) - 0.5 * inv - series;
}

/// Trigamma psi_1(x) = d/dx psi(x), x > 0. Needed for the gradient of the
/// MultiGamma KL.
inline double trigamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("trigamma_fn: x must be > 0");
  double result = 0.0;
  while (x < 10.0) {
    result += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 1.0 +
                  inv * 0.5 +
                  inv2 * (1.0 / 6.0 -
                  inv2 * (1.0 / 30.0 -
                  inv2 * (1.0 / 42.0 -
                  inv2 * (1.0 / 30.0 -
                  inv2 * (5.0 / 66.0)))));
  return result + series * inv;
}

namespace detail {

// Regularized lower incomplete gamma P(a,x) by series (x < a+1).
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 0; n < 500; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  const double lg = a * std::log(x) - x - std::lgamma(a);
  return sum * std::exp(lg);
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction
// (x >= a+1).
inline double gamma_q_contfrac(double a, double x) {
  constexpr double fpmin = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  const double lg = a * std::log(x) - x - std::lgamma(a);
  return h * std::exp(lg);
}

}  // namespace detail

/// Regularized lower incomplete gamma P(a,x), a > 0, x >= 0.
inline double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be > 0");
  if (x < 0.0) throw std::domain_error("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_contfrac(a, x);
}

inline double gamma_log_pdf_unit_rate(double a, double x) {
  return (a - 1.0) * std::log(x) - x - std::lgamma(a);
}

/// Inverse standard-normal CDF (Acklam's rational approximation). Only used
/// to seed Newton iterations; ~1e-9 absolute accuracy.
inline double normal_quantile_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

namespace detail {

// For very small shapes the quantile underflows the double range; the
// leading-order inversion is then exact to machine precision. This
// returns ln x for P(a, x) = u.
inline double log_gamma_quantile_small_shape(double a, double u) {
  return (std::log(u) + std::lgamma(a + 1.0)) / a;
}

inline double gamma_quantile_initial_guess(double a, double u) {
  if (a > 1.0) {
    // Wilson-Hilferty
    const double g = normal_quantile_approx(u);
    const double t = 1.0 - 1.0 / (9.0 * a) + g / (3.0 * std::sqrt(a));
    const double x = a * t * t * t;
    if (x > 0.0 && std::isfinite(x)) return x;
    return a;  // fall back near the mean
  }
  const double t = 1.0 - a * (0.253 + a * 0.12);
  if (u < t) return std::pow(u / t, 1.0 / a);
  return 1.0 - std::log(1.0 - (u - t) / (1.0 - t));
}

}  // namespace detail

/// Inverse of the regularized lower incomplete gamma in x: returns x with
/// P(shape, x) = u, to near machine precision. Deterministic and strictly
/// increasing in u. Safeguarded Newton with a bisection bracket.
inline double gamma_quantile_standard(double shape, double u) {
  if (!(shape > 0.0)) throw std::domain_error("gamma_quantile: shape must be > 0");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("gamma_quantile: u must be in (0,1)");

  {
    // Small-x regime: if the leading-order quantile is tiny, the series
    // corrections are below double precision and Newton would underflow.
    const double lx = detail::log_gamma_quantile_small_shape(shape, u);
    if (lx < std::log(1e-8)) return std::exp(lx);
  }

  double x = detail::gamma_quantile_initial_guess(shape, u);
  x = std::max(x, 1e-300);
  double lo = 0.0;
  double hi = kInf;
  for (int it = 0; it < 100; ++it) {
    const double f = gamma_p(shape, x) - u;
    if (f > 0.0) {
      hi = x;
    } else if (f < 0.0) {
      lo = x;
    } else {
      return x;
    }
    const double pdf = std::exp(gamma_log_pdf_unit_rate(shape, x));
    double xn = (pdf > 0.0) ? x - f / pdf : x;
    if (!(xn > lo && xn < hi) || !std::isfinite(xn)) {
      xn = std::isfinite(hi) ? 0.5 * (lo + hi) : (lo > 0.0 ? 2.0 * lo : 1.0);
    }
    if (std::abs(xn - x) <= 1e-15 * (std::abs(x) + 1e-300)) return xn;
    x = xn;
  }
  return x;
}

/// Gamma(shape, rate) quantile: rate enters as a pure scale.
inline double gamma_quantile(double shape, double rate, double u) {
  if (!(rate > 0.0)) throw std::domain_error("gamma_quantile: rate must be > 0");
  return gamma_quantile_standard(shape, u) / rate;
}

/// d/dshape of gamma_quantile_standard at fixed u, via the implicit-function
/// identity dx/da = -(dP/da)/pdf(a,x). dP/da is a central difference; the
/// small-shape branch is differentiated in closed form. `x` must be the
/// standard-scale quantile already computed for (shape, u).
inline double gamma_quantile_standard_dshape(double shape, double u, double x) {
  const double lx_lead = detail::log_gamma_quantile_small_shape(shape, u);
  if (lx_lead < std::log(1e-8)) {
    // x = exp((ln u + lnGamma(a+1)) / a)
    const double num = std::log(u) + std::lgamma(shape + 1.0);
    return x * (digamma_fn(shape + 1.0) / shape - num / (shape * shape));
  }
  const double h = std::max(1e-7 * shape, 1e-9);
  const double dPda = (gamma_p(shape + h, x) - gamma_p(shape - h, x)) / (2.0 * h);
  const double pdf = std::exp(gamma_log_pdf_unit_rate(shape, x));
  if (pdf <= 0.0) return 0.0;
  return -dPda / pdf;
}

inline double gamma_quantile_dshape(double shape, double rate, double u) {
  const double x = gamma_quantile_standard(shape, u);
  return gamma_quantile_standard_dshape(shape, u, x) / rate;
}

}  // namespace dirlat
