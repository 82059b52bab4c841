#pragma once

// Standard-normal special functions used throughout the library.
// All tail quantities go through erfc so that survival probabilities
// keep full relative precision down to the underflow threshold.

namespace censfit {

inline constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)
inline constexpr double kInvSqrtTwoPi = 0.3989422804014326779;

// Standard normal density phi(r).
double norm_pdf(double r);

// log phi(r).
double norm_log_pdf(double r);

// Upper tail P(N(0,1) > r) = erfc(r/sqrt 2)/2. Underflows to 0 for r > ~38.6.
double norm_survival(double r);

// Lower tail P(N(0,1) <= r).
double norm_cdf(double r);

// log of the upper tail. Returns -inf exactly when norm_survival underflows;
// the likelihood layer keys its F==1 rule off that.
double norm_log_survival(double r);

// Hazard phi(r) / (1 - Phi(r)). Finite for all r where it is called with
// norm_survival(r) > 0; for large r an asymptotic Mills-ratio expansion is
// used so the ratio never degrades through subnormal intermediates.
double norm_hazard(double r);

// Quantile Phi^{-1}(u) for u in (0,1). Accurate to ~1 ulp after refinement.
double norm_quantile(double u);

}  // namespace censfit
