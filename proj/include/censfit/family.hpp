#pragma once

#include <Eigen/Core>

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace censfit {

// Parameter vector on the natural (constrained) scale. Packing order is
// (regression coefficients..., scale/shape last); every matrix the library
// reports uses this row order.
using ParamVector = Eigen::VectorXd;

// Raised when a survival-side derivative is requested at a point where the
// conditional CDF evaluates to one in floating point. The likelihood layer
// never triggers this: it zeroes such terms before differentiating.
struct FullyCensoredAtomError : std::domain_error {
  using std::domain_error::domain_error;
};

struct LogLikHessians {
  Eigen::MatrixXd log_density;   // d^2/dtheta^2 of log f(y|theta,x)
  Eigen::MatrixXd log_survival;  // d^2/dtheta^2 of log(1 - F(y|theta,x))
};

// A parametric conditional distribution family: density, CDF tail and
// analytic first/second parameter derivatives, all on the natural scale.
class Family {
 public:
  virtual ~Family() = default;

  const std::string& name() const { return name_; }
  int param_dim() const { return q_; }      // q
  int covariate_dim() const { return p_; }  // p
  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }

  virtual bool in_admissible_set(const ParamVector& theta) const = 0;

  virtual double log_density(const ParamVector& theta, const Eigen::VectorXd& x,
                             double y) const = 0;
  // log(1 - F): complementary-CDF path throughout; -inf exactly when the
  // survival probability underflows to zero.
  virtual double log_survival(const ParamVector& theta, const Eigen::VectorXd& x,
                              double y) const = 0;
  virtual Eigen::VectorXd grad_log_density(const ParamVector& theta,
                                           const Eigen::VectorXd& x, double y) const = 0;
  virtual Eigen::VectorXd grad_log_survival(const ParamVector& theta,
                                            const Eigen::VectorXd& x, double y) const = 0;
  virtual LogLikHessians hess_log_lik_terms(const ParamVector& theta,
                                            const Eigen::VectorXd& x, double y) const = 0;

  double survival(const ParamVector& theta, const Eigen::VectorXd& x, double y) const;

  // Indices of parameters constrained to be positive (log-reparameterized
  // by the optimizer; everything else is unconstrained).
  virtual std::vector<int> positive_params() const = 0;

  // [lo, hi] covering all but ~exp(-tail_cut^2/2) of the conditional mass,
  // used to truncate integrals over y.
  virtual std::pair<double, double> quadrature_range(const ParamVector& theta,
                                                     const Eigen::VectorXd& x,
                                                     double tail_cut) const = 0;

  // Checks dimensions and admissibility; throws std::invalid_argument or
  // std::domain_error with a specific message.
  void validate(const ParamVector& theta, const Eigen::VectorXd& x) const;

  // Factory for the CLI/config identifiers "normal-linear" and "weibull-aft".
  static std::unique_ptr<Family> create(const std::string& name, int covariate_dim);

 protected:
  Family(std::string name, int p, int q, double lo, double hi)
      : name_(std::move(name)), p_(p), q_(q), support_min_(lo), support_max_(hi) {}

 private:
  std::string name_;
  int p_;
  int q_;
  double support_min_;
  double support_max_;
};

// Conditional law N(beta'x, sigma^2); theta = (beta..., sigma) with q = p+1,
// or theta = beta with q = p when sigma is fixed externally.
class NormalLinearFamily final : public Family {
 public:
  explicit NormalLinearFamily(int covariate_dim);
  NormalLinearFamily(int covariate_dim, double fixed_sigma);

  bool sigma_fixed() const { return sigma_fixed_; }

  bool in_admissible_set(const ParamVector& theta) const override;
  double log_density(const ParamVector& theta, const Eigen::VectorXd& x,
                     double y) const override;
  double log_survival(const ParamVector& theta, const Eigen::VectorXd& x,
                      double y) const override;
  Eigen::VectorXd grad_log_density(const ParamVector& theta, const Eigen::VectorXd& x,
                                   double y) const override;
  Eigen::VectorXd grad_log_survival(const ParamVector& theta, const Eigen::VectorXd& x,
                                    double y) const override;
  LogLikHessians hess_log_lik_terms(const ParamVector& theta, const Eigen::VectorXd& x,
                                    double y) const override;
  std::vector<int> positive_params() const override;
  std::pair<double, double> quadrature_range(const ParamVector& theta,
                                             const Eigen::VectorXd& x,
                                             double tail_cut) const override;

 private:
  double sigma_of(const ParamVector& theta) const;

  bool sigma_fixed_ = false;
  double fixed_sigma_ = 1.0;
};

// Weibull accelerated failure time: shape k, scale exp(beta'x), support y > 0;
// theta = (beta..., k), q = p+1.
class WeibullAftFamily final : public Family {
 public:
  explicit WeibullAftFamily(int covariate_dim);

  bool in_admissible_set(const ParamVector& theta) const override;
  double log_density(const ParamVector& theta, const Eigen::VectorXd& x,
                     double y) const override;
  double log_survival(const ParamVector& theta, const Eigen::VectorXd& x,
                      double y) const override;
  Eigen::VectorXd grad_log_density(const ParamVector& theta, const Eigen::VectorXd& x,
                                   double y) const override;
  Eigen::VectorXd grad_log_survival(const ParamVector& theta, const Eigen::VectorXd& x,
                                    double y) const override;
  LogLikHessians hess_log_lik_terms(const ParamVector& theta, const Eigen::VectorXd& x,
                                    double y) const override;
  std::vector<int> positive_params() const override;
  std::pair<double, double> quadrature_range(const ParamVector& theta,
                                             const Eigen::VectorXd& x,
                                             double tail_cut) const override;
};

}  // namespace censfit
