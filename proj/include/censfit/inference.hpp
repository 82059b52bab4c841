#pragma once

#include "censfit/kl.hpp"
#include "censfit/likelihood.hpp"

namespace censfit {

struct InferenceReport {
  Eigen::MatrixXd sigma_hat;   // estimate of the per-observation information
  Eigen::MatrixXd cov_theta;   // sigma_hat^{-1} / n
  Eigen::VectorXd std_errors;
  Eigen::VectorXd ci_lower;
  Eigen::VectorXd ci_upper;
  double level = 0.95;
  double condition = 0.0;      // eigenvalue condition number of sigma_hat
  bool spd_failure = false;    // sigma_hat not positive definite; covariance
                               // entries are NaN rather than a pseudo-inverse
  bool ill_conditioned = false;  // condition above 1e10
};

// Observed information divided by n: the plug-in estimate of Sigma.
Eigen::MatrixXd sigma_observed(const Family& fam, const ParamVector& theta,
                               const Dataset& data);

// Mean outer product of the per-observation scores; consistent for the same
// Sigma by the information-matrix identity, exposed for diagnostics.
Eigen::MatrixXd sigma_outer(const Family& fam, const ParamVector& theta,
                            const Dataset& data);

struct SigmaPopulationResult {
  Eigen::MatrixXd sigma;    // Sigma = Sigma1 + Sigma2
  Eigen::MatrixXd sigma1;   // E[(1-G(Y-)) grad grad^T]
  Eigen::MatrixXd sigma2;   // censored-score component (PSD)
  double error_estimate = 0.0;
  bool converged = true;
};

// Population information under known censoring and covariate laws, by nested
// quadrature. The second summand's integrand is defined to be zero wherever
// F(c|theta0,x) evaluates to one.
SigmaPopulationResult sigma_population(const Family& fam, const ParamVector& theta0,
                                       const CensoringLaw& censoring,
                                       const CovariateLaw& covariates,
                                       const QuadConfig& quad = {});

// Influence values xi_i = sigma_hat^{-1} s_i. Throws std::runtime_error when
// sigma_hat is not invertible.
std::vector<Eigen::VectorXd> influence_values(const Family& fam, const ParamVector& theta,
                                              const Eigen::MatrixXd& sigma_hat,
                                              const Dataset& data);

// Wald intervals theta_r +- z_{(1+level)/2} sqrt(cov_theta[r,r]).
std::pair<Eigen::VectorXd, Eigen::VectorXd> wald_intervals(const ParamVector& theta_hat,
                                                           const Eigen::MatrixXd& cov_theta,
                                                           double level);

// Full report at the fitted point: observed-information Sigma estimate,
// covariance, standard errors and Wald intervals.
InferenceReport make_inference_report(const Family& fam, const ParamVector& theta_hat,
                                      const Dataset& data, double level = 0.95);

}  // namespace censfit
