#include "censfit/inference.hpp"

#include "censfit/normal.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace censfit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConditionWarn = 1e10;
}  // namespace

Eigen::MatrixXd sigma_observed(const Family& fam, const ParamVector& theta,
                               const Dataset& data) {
  return observed_information(fam, theta, data) / static_cast<double>(data.size());
}

Eigen::MatrixXd sigma_outer(const Family& fam, const ParamVector& theta,
                            const Dataset& data) {
  const int q = fam.param_dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(q, q);
  for (const Eigen::VectorXd& s : per_observation_scores(fam, theta, data))
    acc.noalias() += s * s.transpose();
  return acc / static_cast<double>(data.size());
}

SigmaPopulationResult sigma_population(const Family& fam, const ParamVector& theta0,
                                       const CensoringLaw& censoring,
                                       const CovariateLaw& covariates,
                                       const QuadConfig& quad) {
  if (covariates.p != fam.covariate_dim())
    throw std::invalid_argument("covariate law dimension does not match family");
  const int q = fam.param_dim();
  const double inner_tol = quad.abs_tolerance / 10.0;

  SigmaPopulationResult result;
  bool ok = true;
  double err = 0.0;

  // Sigma1 = E[ Gbar(Y) grad grad^T ]: for each x integrate the outer product
  // of the uncensored score against f(.|theta0,x), weighted by the chance of
  // the response escaping censoring.
  result.sigma1 = Eigen::MatrixXd::Map(
      covariates
          .average(q * q,
                   [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
                     const auto [lo, hi] = fam.quadrature_range(theta0, x, quad.tail_cut);
                     QuadConfig inner = quad;
                     inner.abs_tolerance = inner_tol;
                     const QuadVecResult r = integrate_vec(
                         [&](double y, Eigen::VectorXd& v) {
                           const double lf = fam.log_density(theta0, x, y);
                           if (lf == -kInf) {
                             v.setZero();
                             return;
                           }
                           const Eigen::VectorXd g = fam.grad_log_density(theta0, x, y);
                           const double w = std::exp(lf) * censoring.survival(y);
                           Eigen::MatrixXd::Map(v.data(), q, q) = w * (g * g.transpose());
                         },
                         q * q, lo, hi, inner);
                     ok &= r.converged;
                     err += r.error;
                     out = r.value;
                   })
          .data(),
      q, q);

  // Sigma2: expectation over (x, c) of a a^T / (1-F) with
  // a(x,c) = integral_{y <= c} grad log f * f dy. The full-range integral of
  // the score is zero, so for c past the conditional center the complementary
  // integral is used; the integrand is zero wherever F(c) == 1.
  result.sigma2 = Eigen::MatrixXd::Zero(q, q);
  if (!censoring.is_infinite()) {
    const auto [clo, chi] = censoring.range(quad.tail_cut);
    result.sigma2 = Eigen::MatrixXd::Map(
        covariates
            .average(q * q,
                     [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
                       const auto [ylo, yhi] = fam.quadrature_range(theta0, x, quad.tail_cut);
                       QuadConfig inner = quad;
                       inner.abs_tolerance = inner_tol;

                       auto partial_score = [&](double c) -> Eigen::VectorXd {
                         auto weighted = [&](double y, Eigen::VectorXd& v) {
                           const double lf = fam.log_density(theta0, x, y);
                           if (lf == -kInf) {
                             v.setZero();
                             return;
                           }
                           v = std::exp(lf) * fam.grad_log_density(theta0, x, y);
                         };
                         const double mid = 0.5 * (ylo + yhi);
                         if (c <= mid) {
                           if (!(c > ylo)) return Eigen::VectorXd::Zero(q);
                           const QuadVecResult r = integrate_vec(weighted, q, ylo, c, inner);
                           ok &= r.converged;
                           return r.value;
                         }
                         if (!(c < yhi)) return Eigen::VectorXd::Zero(q);
                         const QuadVecResult r = integrate_vec(weighted, q, c, yhi, inner);
                         ok &= r.converged;
                         return -r.value;
                       };

                       const QuadVecResult outer = integrate_vec(
                           [&](double c, Eigen::VectorXd& v) {
                             const double ls = fam.log_survival(theta0, x, c);
                             if (ls == -kInf) {  // F == 1: defined to be zero
                               v.setZero();
                               return;
                             }
                             const Eigen::VectorXd a = partial_score(c);
                             const double w = censoring.density(c) / std::exp(ls);
                             Eigen::MatrixXd::Map(v.data(), q, q) = w * (a * a.transpose());
                           },
                           q * q, clo, chi, quad);
                       ok &= outer.converged;
                       err += outer.error;
                       out = outer.value;
                     })
            .data(),
        q, q);
  }

  result.sigma = result.sigma1 + result.sigma2;
  result.error_estimate = err;
  result.converged = ok;
  return result;
}

std::vector<Eigen::VectorXd> influence_values(const Family& fam, const ParamVector& theta,
                                              const Eigen::MatrixXd& sigma_hat,
                                              const Dataset& data) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_hat);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("influence_values: sigma_hat is not positive definite");
  std::vector<Eigen::VectorXd> xi = per_observation_scores(fam, theta, data);
  for (auto& v : xi) v = llt.solve(v);
  return xi;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> wald_intervals(const ParamVector& theta_hat,
                                                           const Eigen::MatrixXd& cov_theta,
                                                           double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("wald_intervals: level must lie in (0,1)");
  const double z = norm_quantile(0.5 * (1.0 + level));
  Eigen::VectorXd lower(theta_hat.size()), upper(theta_hat.size());
  for (int r = 0; r < theta_hat.size(); ++r) {
    const double se = std::sqrt(cov_theta(r, r));
    lower[r] = theta_hat[r] - z * se;
    upper[r] = theta_hat[r] + z * se;
  }
  return {lower, upper};
}

InferenceReport make_inference_report(const Family& fam, const ParamVector& theta_hat,
                                      const Dataset& data, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("inference: level must lie in (0,1)");
  const int q = fam.param_dim();
  InferenceReport rep;
  rep.level = level;
  rep.sigma_hat = sigma_observed(fam, theta_hat, data);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rep.sigma_hat);
  const double lam_min = eig.eigenvalues().minCoeff();
  const double lam_max = eig.eigenvalues().maxCoeff();
  rep.condition = lam_min > 0.0 ? lam_max / lam_min : kInf;
  rep.ill_conditioned = !(rep.condition < kConditionWarn);

  if (lam_min <= 0.0) {
    rep.spd_failure = true;
    rep.cov_theta = Eigen::MatrixXd::Constant(q, q, std::nan(""));
    rep.std_errors = Eigen::VectorXd::Constant(q, std::nan(""));
    rep.ci_lower = rep.std_errors;
    rep.ci_upper = rep.std_errors;
    return rep;
  }

  Eigen::LLT<Eigen::MatrixXd> llt(rep.sigma_hat);
  rep.cov_theta =
      llt.solve(Eigen::MatrixXd::Identity(q, q)) / static_cast<double>(data.size());
  rep.std_errors = rep.cov_theta.diagonal().cwiseSqrt();
  std::tie(rep.ci_lower, rep.ci_upper) = wald_intervals(theta_hat, rep.cov_theta, level);
  return rep;
}

}  // namespace censfit
