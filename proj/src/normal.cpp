#include "censfit/normal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace censfit {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double norm_pdf(double r) { return kInvSqrtTwoPi * std::exp(-0.5 * r * r); }

double norm_log_pdf(double r) { return -0.5 * (kLogTwoPi + r * r); }

double norm_survival(double r) { return 0.5 * std::erfc(r / kSqrt2); }

double norm_cdf(double r) { return 0.5 * std::erfc(-r / kSqrt2); }

double norm_log_survival(double r) {
  const double s = std::erfc(r / kSqrt2);
  if (s == 0.0) return -kInf;
  // erfc keeps full relative precision in the tail until it goes subnormal,
  // so log(s/2) is accurate wherever s is normal.
  return std::log(0.5 * s);
}

double norm_hazard(double r) {
  if (r > 30.0) {
    // Mills ratio m(r) = (1/r) * (1 - r^-2 + 3 r^-4 - 15 r^-6 + ...);
    // at r = 30 eight terms are already below double epsilon.
    const double v = 1.0 / (r * r);
    double term = 1.0, series = 1.0;
    for (int k = 1; k <= 8; ++k) {
      term *= -static_cast<double>(2 * k - 1) * v;
      series += term;
    }
    return r / series;
  }
  const double s = norm_survival(r);
  return norm_pdf(r) / s;
}

double norm_quantile(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("norm_quantile: u must lie in (0,1)");

  // Acklam's rational approximation, then one Halley step through erfc.
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

  double x;
  if (u < plow) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - plow) {
    const double q = u - 0.5, t = q * q;
    x = (((((a[0] * t + a[1]) * t + a[2]) * t + a[3]) * t + a[4]) * t + a[5]) *
        q /
        (((((b[0] * t + b[1]) * t + b[2]) * t + b[3]) * t + b[4]) * t + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // Halley refinement: e = Phi(x) - u evaluated through the stable tail,
  // keeping the subtraction in whichever tail is small.
  const double e = x < 0.0 ? norm_survival(-x) - u : (1.0 - u) - norm_survival(x);
  const double pdf = norm_pdf(x);
  if (pdf > 0.0) {
    const double w = e / pdf;
    x -= w / (1.0 + 0.5 * x * w);
  }
  return x;
}

}  // namespace censfit
