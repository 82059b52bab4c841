#pragma once

#include "censfit/family.hpp"
#include "censfit/quadrature.hpp"

#include <functional>
#include <vector>

namespace censfit {

// Distribution of the censoring time C. The point mass at infinity encodes
// "no censoring": every observation is uncensored with probability one.
struct CensoringLaw {
  enum class Kind { Normal, PointMassAtInfinity };

  Kind kind = Kind::PointMassAtInfinity;
  double mu = 0.0;
  double sd = 1.0;

  static CensoringLaw normal(double mu, double sd);
  static CensoringLaw point_mass_at_infinity() { return {}; }

  bool is_infinite() const { return kind == Kind::PointMassAtInfinity; }
  double density(double c) const;
  double survival(double y) const;  // 1 - G(y); G continuous, so G(y-) = G(y)
  std::pair<double, double> range(double tail_cut) const;
};

// Distribution of the covariate vector X. Either the two-dimensional
// intercept-plus-uniform design (x = (1, u), u ~ U(a,b)) or a finite list of
// weighted support points.
struct CovariateLaw {
  enum class Kind { InterceptPlusUniform, FinitePoints };

  Kind kind = Kind::FinitePoints;
  int p = 0;
  double a = 0.0, b = 0.0;                                  // uniform bounds
  std::vector<std::pair<Eigen::VectorXd, double>> points;   // (x, weight)

  static CovariateLaw intercept_plus_uniform(double a, double b);
  static CovariateLaw finite_points(std::vector<std::pair<Eigen::VectorXd, double>> pts);

  // Average of a vector-valued function of x under the law. The uniform
  // component uses a fixed composite Gauss-Legendre rule so the tensor
  // product with the adaptive inner integrals stays deterministic.
  Eigen::VectorXd average(int dim,
                          const std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>& fn) const;
  double average(const std::function<double(const Eigen::VectorXd&)>& fn) const;
};

struct KlEvaluation {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

// Extended Kullback-Leibler information between theta1 and theta2 under
// censoring law G and covariate law H. Codomain [0, inf]: an infinite value
// (theta2 assigns zero mass where theta1 does not) is returned as +inf, not
// treated as a failure.
KlEvaluation kl_extended_detail(const Family& fam, const ParamVector& theta1,
                                const ParamVector& theta2, const CensoringLaw& censoring,
                                const CovariateLaw& covariates, const QuadConfig& quad = {});
double kl_extended(const Family& fam, const ParamVector& theta1, const ParamVector& theta2,
                   const CensoringLaw& censoring, const CovariateLaw& covariates,
                   const QuadConfig& quad = {});

// Expected per-observation log-likelihood L(theta0, theta): the almost-sure
// limit of log_lik/n when the data are generated at theta0.
KlEvaluation expected_loglik_detail(const Family& fam, const ParamVector& theta0,
                                    const ParamVector& theta, const CensoringLaw& censoring,
                                    const CovariateLaw& covariates, const QuadConfig& quad = {});
double expected_loglik(const Family& fam, const ParamVector& theta0, const ParamVector& theta,
                       const CensoringLaw& censoring, const CovariateLaw& covariates,
                       const QuadConfig& quad = {});

}  // namespace censfit
