#include "censfit/kl.hpp"

#include "censfit/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace censfit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kUniformPanels = 16;
}  // namespace

CensoringLaw CensoringLaw::normal(double mu, double sd) {
  if (!(sd > 0.0)) throw std::domain_error("censoring law: sd must be positive");
  CensoringLaw law;
  law.kind = Kind::Normal;
  law.mu = mu;
  law.sd = sd;
  return law;
}

double CensoringLaw::density(double c) const {
  if (is_infinite()) return 0.0;
  return norm_pdf((c - mu) / sd) / sd;
}

double CensoringLaw::survival(double y) const {
  if (is_infinite()) return 1.0;
  return norm_survival((y - mu) / sd);
}

std::pair<double, double> CensoringLaw::range(double tail_cut) const {
  return {mu - tail_cut * sd, mu + tail_cut * sd};
}

CovariateLaw CovariateLaw::intercept_plus_uniform(double a, double b) {
  if (!(a < b)) throw std::domain_error("covariate law: requires a < b");
  CovariateLaw law;
  law.kind = Kind::InterceptPlusUniform;
  law.p = 2;
  law.a = a;
  law.b = b;
  return law;
}

CovariateLaw CovariateLaw::finite_points(std::vector<std::pair<Eigen::VectorXd, double>> pts) {
  if (pts.empty()) throw std::domain_error("covariate law: no support points");
  double total = 0.0;
  for (const auto& [x, w] : pts) {
    if (w < 0.0) throw std::domain_error("covariate law: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::domain_error("covariate law: weights must sum to one");
  CovariateLaw law;
  law.kind = Kind::FinitePoints;
  law.p = static_cast<int>(pts.front().first.size());
  for (const auto& [x, w] : pts)
    if (x.size() != law.p) throw std::domain_error("covariate law: mixed dimensions");
  law.points = std::move(pts);
  return law;
}

Eigen::VectorXd CovariateLaw::average(
    int dim, const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& fn) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd val(dim);
  if (kind == Kind::FinitePoints) {
    for (const auto& [x, w] : points) {
      fn(x, val);
      acc += w * val;
    }
    return acc;
  }
  // x = (1, u), u ~ U(a,b): composite 10-point Gauss-Legendre over [a,b].
  Eigen::VectorXd x(2);
  x[0] = 1.0;
  const double density = 1.0 / (b - a);
  static constexpr double kGlX[5] = {0.148874338981631210884826001130, 0.433395394129247190799265943166,
                                     0.679409568299024406234327365115, 0.865063366688984510732096688423,
                                     0.973906528517171720077964012084};
  static constexpr double kGlW[5] = {0.295524224714752870173892994651, 0.269266719309996355091226921569,
                                     0.219086362515982043995534934228, 0.149451349150580593145776339658,
                                     0.066671344308688137593568809893};
  const double width = (b - a) / kUniformPanels;
  for (int panel = 0; panel < kUniformPanels; ++panel) {
    const double lo = a + panel * width;
    const double center = lo + 0.5 * width, half = 0.5 * width;
    for (int j = 0; j < 5; ++j) {
      for (const double sgn : {-1.0, 1.0}) {
        x[1] = center + sgn * half * kGlX[j];
        fn(x, val);
        acc += (kGlW[j] * half * density) * val;
      }
    }
  }
  return acc;
}

double CovariateLaw::average(const std::function<double(const Eigen::VectorXd&)>& fn) const {
  const Eigen::VectorXd r = average(1, [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    out[0] = fn(x);
  });
  return r[0];
}

namespace {

// inner integral of (log f1 - log f2) f1 over y in [lo, min(c, hi)];
// integrand short-circuits to 0 wherever f1 vanishes and is +inf where f2
// vanishes but f1 does not (mass escaping theta2's support).
QuadResult kl_density_part(const Family& fam, const ParamVector& t1, const ParamVector& t2,
                           const Eigen::VectorXd& x, double upper, const QuadConfig& quad,
                           double inner_tol) {
  const auto [lo, hi] = fam.quadrature_range(t1, x, quad.tail_cut);
  const double top = std::min(upper, hi);
  if (!(top > lo)) return {0.0, 0.0, true, 0};
  QuadConfig inner = quad;
  inner.abs_tolerance = inner_tol;
  return integrate(
      [&](double y) {
        const double lf1 = fam.log_density(t1, x, y);
        if (lf1 == -kInf) return 0.0;
        const double lf2 = fam.log_density(t2, x, y);
        if (lf2 == -kInf) return kInf;
        return (lf1 - lf2) * std::exp(lf1);
      },
      lo, top, inner);
}

// survival part (1-F1)(c) * log((1-F1)/(1-F2))(c) with 0 log(0/0) := 0.
double kl_survival_part(const Family& fam, const ParamVector& t1, const ParamVector& t2,
                        const Eigen::VectorXd& x, double c) {
  const double ls1 = fam.log_survival(t1, x, c);
  if (ls1 == -kInf) return 0.0;
  const double ls2 = fam.log_survival(t2, x, c);
  if (ls2 == -kInf) return kInf;
  return std::exp(ls1) * (ls1 - ls2);
}

}  // namespace

KlEvaluation kl_extended_detail(const Family& fam, const ParamVector& theta1,
                                const ParamVector& theta2, const CensoringLaw& censoring,
                                const CovariateLaw& covariates, const QuadConfig& quad) {
  if (covariates.p != fam.covariate_dim())
    throw std::invalid_argument("covariate law dimension does not match family");
  const double inner_tol = quad.abs_tolerance / 10.0;

  if (censoring.is_infinite()) {
    // no censoring: K_H, the covariate-averaged divergence of the densities
    bool inner_ok = true;
    const double value = covariates.average([&](const Eigen::VectorXd& x) {
      const QuadResult r = kl_density_part(fam, theta1, theta2, x, kInf, quad, inner_tol);
      inner_ok &= (r.converged || std::isinf(r.value));
      return r.value;
    });
    return {value, inner_tol, inner_ok};
  }

  const auto [clo, chi] = censoring.range(quad.tail_cut);
  bool inner_ok = true;
  const QuadResult outer = integrate(
      [&](double c) {
        const double gc = censoring.density(c);
        if (gc == 0.0) return 0.0;
        const double avg = covariates.average([&](const Eigen::VectorXd& x) {
          const QuadResult r = kl_density_part(fam, theta1, theta2, x, c, quad, inner_tol);
          inner_ok &= (r.converged || std::isinf(r.value));
          return r.value + kl_survival_part(fam, theta1, theta2, x, c);
        });
        return gc * avg;
      },
      clo, chi, quad);
  return {outer.value, outer.error, outer.converged && inner_ok};
}

double kl_extended(const Family& fam, const ParamVector& theta1, const ParamVector& theta2,
                   const CensoringLaw& censoring, const CovariateLaw& covariates,
                   const QuadConfig& quad) {
  const KlEvaluation ev = kl_extended_detail(fam, theta1, theta2, censoring, covariates, quad);
  if (!ev.converged && std::isfinite(ev.value))
    throw QuadratureError("kl_extended: quadrature failed to reach the requested tolerance");
  return ev.value;
}

KlEvaluation expected_loglik_detail(const Family& fam, const ParamVector& theta0,
                                    const ParamVector& theta, const CensoringLaw& censoring,
                                    const CovariateLaw& covariates, const QuadConfig& quad) {
  if (covariates.p != fam.covariate_dim())
    throw std::invalid_argument("covariate law dimension does not match family");
  const double inner_tol = quad.abs_tolerance / 10.0;

  auto density_part = [&](const Eigen::VectorXd& x, double upper) {
    const auto [lo, hi] = fam.quadrature_range(theta0, x, quad.tail_cut);
    const double top = std::min(upper, hi);
    if (!(top > lo)) return QuadResult{0.0, 0.0, true, 0};
    QuadConfig inner = quad;
    inner.abs_tolerance = inner_tol;
    return integrate(
        [&](double y) {
          const double lf0 = fam.log_density(theta0, x, y);
          if (lf0 == -kInf) return 0.0;
          const double lf = fam.log_density(theta, x, y);
          if (lf == -kInf) return -kInf;
          return lf * std::exp(lf0);
        },
        lo, top, inner);
  };

  if (censoring.is_infinite()) {
    bool inner_ok = true;
    const double value = covariates.average([&](const Eigen::VectorXd& x) {
      const QuadResult r = density_part(x, kInf);
      inner_ok &= (r.converged || std::isinf(r.value));
      return r.value;
    });
    return {value, inner_tol, inner_ok};
  }

  const auto [clo, chi] = censoring.range(quad.tail_cut);
  bool inner_ok = true;
  const QuadResult outer = integrate(
      [&](double c) {
        const double gc = censoring.density(c);
        if (gc == 0.0) return 0.0;
        const double avg = covariates.average([&](const Eigen::VectorXd& x) {
          const QuadResult r = density_part(x, c);
          inner_ok &= (r.converged || std::isinf(r.value));
          double surv = 0.0;
          const double ls0 = fam.log_survival(theta0, x, c);
          if (ls0 != -kInf) {  // otherwise the censored factor is zero
            const double ls = fam.log_survival(theta, x, c);
            surv = ls == -kInf ? -kInf : std::exp(ls0) * ls;
          }
          return r.value + surv;
        });
        return gc * avg;
      },
      clo, chi, quad);
  return {outer.value, outer.error, outer.converged && inner_ok};
}

double expected_loglik(const Family& fam, const ParamVector& theta0, const ParamVector& theta,
                       const CensoringLaw& censoring, const CovariateLaw& covariates,
                       const QuadConfig& quad) {
  const KlEvaluation ev = expected_loglik_detail(fam, theta0, theta, censoring, covariates, quad);
  if (!ev.converged && std::isfinite(ev.value))
    throw QuadratureError("expected_loglik: quadrature failed to reach the requested tolerance");
  return ev.value;
}

}  // namespace censfit
