#include "censfit/family.hpp"

#include "censfit/normal.hpp"

#include <cmath>
#include <limits>

namespace censfit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double Family::survival(const ParamVector& theta, const Eigen::VectorXd& x,
                        double y) const {
  return std::exp(log_survival(theta, x, y));
}

void Family::validate(const ParamVector& theta, const Eigen::VectorXd& x) const {
  if (theta.size() != q_)
    throw std::invalid_argument(name_ + ": parameter vector has length " +
                                std::to_string(theta.size()) + ", expected " +
                                std::to_string(q_));
  if (x.size() != p_)
    throw std::invalid_argument(name_ + ": covariate vector has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(p_));
  if (!in_admissible_set(theta))
    throw std::domain_error(name_ + ": parameter outside the admissible set");
}

std::unique_ptr<Family> Family::create(const std::string& name, int covariate_dim) {
  if (name == "normal-linear")
    return std::make_unique<NormalLinearFamily>(covariate_dim);
  if (name == "weibull-aft")
    return std::make_unique<WeibullAftFamily>(covariate_dim);
  throw std::invalid_argument("unknown family '" + name +
                              "' (expected normal-linear or weibull-aft)");
}

// ---------------------------------------------------------------------------
// Normal linear model

NormalLinearFamily::NormalLinearFamily(int covariate_dim)
    : Family("normal-linear", covariate_dim, covariate_dim + 1, -kInf, kInf) {}

NormalLinearFamily::NormalLinearFamily(int covariate_dim, double fixed_sigma)
    : Family("normal-linear", covariate_dim, covariate_dim, -kInf, kInf),
      sigma_fixed_(true),
      fixed_sigma_(fixed_sigma) {
  if (!(fixed_sigma > 0.0))
    throw std::domain_error("normal-linear: fixed sigma must be positive");
}

double NormalLinearFamily::sigma_of(const ParamVector& theta) const {
  return sigma_fixed_ ? fixed_sigma_ : theta[param_dim() - 1];
}

bool NormalLinearFamily::in_admissible_set(const ParamVector& theta) const {
  if (theta.size() != param_dim() || !theta.allFinite()) return false;
  return sigma_fixed_ || theta[param_dim() - 1] > 0.0;
}

std::vector<int> NormalLinearFamily::positive_params() const {
  if (sigma_fixed_) return {};
  return {param_dim() - 1};
}

double NormalLinearFamily::log_density(const ParamVector& theta,
                                       const Eigen::VectorXd& x, double y) const {
  validate(theta, x);
  const double sigma = sigma_of(theta);
  const double r = (y - theta.head(covariate_dim()).dot(x)) / sigma;
  return norm_log_pdf(r) - std::log(sigma);
}

double NormalLinearFamily::log_survival(const ParamVector& theta,
                                        const Eigen::VectorXd& x, double y) const {
  validate(theta, x);
  const double sigma = sigma_of(theta);
  const double r = (y - theta.head(covariate_dim()).dot(x)) / sigma;
  return norm_log_survival(r);
}

Eigen::VectorXd NormalLinearFamily::grad_log_density(const ParamVector& theta,
                                                     const Eigen::VectorXd& x,
                                                     double y) const {
  validate(theta, x);
  const int p = covariate_dim();
  const double sigma = sigma_of(theta);
  const double r = (y - theta.head(p).dot(x)) / sigma;
  Eigen::VectorXd g(param_dim());
  g.head(p) = (r / sigma) * x;
  if (!sigma_fixed_) g[p] = (r * r - 1.0) / sigma;
  return g;
}

Eigen::VectorXd NormalLinearFamily::grad_log_survival(const ParamVector& theta,
                                                      const Eigen::VectorXd& x,
                                                      double y) const {
  validate(theta, x);
  const int p = covariate_dim();
  const double sigma = sigma_of(theta);
  const double r = (y - theta.head(p).dot(x)) / sigma;
  if (norm_log_survival(r) == -kInf)
    throw FullyCensoredAtomError("normal-linear: F = 1 at the evaluation point");
  const double h = norm_hazard(r);
  Eigen::VectorXd g(param_dim());
  g.head(p) = (h / sigma) * x;
  if (!sigma_fixed_) g[p] = h * r / sigma;
  return g;
}

LogLikHessians NormalLinearFamily::hess_log_lik_terms(const ParamVector& theta,
                                                      const Eigen::VectorXd& x,
                                                      double y) const {
  validate(theta, x);
  const int p = covariate_dim();
  const int q = param_dim();
  const double sigma = sigma_of(theta);
  const double inv_s2 = 1.0 / (sigma * sigma);
  const double r = (y - theta.head(p).dot(x)) / sigma;

  LogLikHessians out;
  out.log_density.resize(q, q);
  out.log_survival.resize(q, q);

  const Eigen::MatrixXd xxt = x * x.transpose();
  out.log_density.topLeftCorner(p, p) = -inv_s2 * xxt;
  if (!sigma_fixed_) {
    out.log_density.block(0, p, p, 1) = (-2.0 * r * inv_s2) * x;
    out.log_density.block(p, 0, 1, p) = out.log_density.block(0, p, p, 1).transpose();
    out.log_density(p, p) = (1.0 - 3.0 * r * r) * inv_s2;
  }

  if (norm_log_survival(r) == -kInf)
    throw FullyCensoredAtomError("normal-linear: F = 1 at the evaluation point");
  const double h = norm_hazard(r);
  const double d1 = -h;             // d log S / dr
  const double d2 = h * (r - h);    // d^2 log S / dr^2
  out.log_survival.topLeftCorner(p, p) = (d2 * inv_s2) * xxt;
  if (!sigma_fixed_) {
    out.log_survival.block(0, p, p, 1) = ((d2 * r + d1) * inv_s2) * x;
    out.log_survival.block(p, 0, 1, p) = out.log_survival.block(0, p, p, 1).transpose();
    out.log_survival(p, p) = (d2 * r * r + 2.0 * d1 * r) * inv_s2;
  }
  return out;
}

std::pair<double, double> NormalLinearFamily::quadrature_range(
    const ParamVector& theta, const Eigen::VectorXd& x, double tail_cut) const {
  const double mu = theta.head(covariate_dim()).dot(x);
  const double sigma = sigma_of(theta);
  return {mu - tail_cut * sigma, mu + tail_cut * sigma};
}

// ---------------------------------------------------------------------------
// Weibull accelerated failure time
//
// With u = log y - beta'x and w = k*u: log f = log k + w - log y - e^w and
// log(1-F) = -e^w. All derivatives below are in terms of (u, e^w).

WeibullAftFamily::WeibullAftFamily(int covariate_dim)
    : Family("weibull-aft", covariate_dim, covariate_dim + 1, 0.0, kInf) {}

bool WeibullAftFamily::in_admissible_set(const ParamVector& theta) const {
  return theta.size() == param_dim() && theta.allFinite() &&
         theta[param_dim() - 1] > 0.0;
}

std::vector<int> WeibullAftFamily::positive_params() const {
  return {param_dim() - 1};
}

double WeibullAftFamily::log_density(const ParamVector& theta,
                                     const Eigen::VectorXd& x, double y) const {
  validate(theta, x);
  if (!(y > 0.0)) return -kInf;
  const int p = covariate_dim();
  const double k = theta[p];
  const double u = std::log(y) - theta.head(p).dot(x);
  const double w = k * u;
  return std::log(k) + w - std::log(y) - std::exp(w);
}

double WeibullAftFamily::log_survival(const ParamVector& theta,
                                      const Eigen::VectorXd& x, double y) const {
  validate(theta, x);
  if (!(y > 0.0)) return 0.0;  // survival is one at or below the support
  const int p = covariate_dim();
  const double k = theta[p];
  const double u = std::log(y) - theta.head(p).dot(x);
  return -std::exp(k * u);
}

Eigen::VectorXd WeibullAftFamily::grad_log_density(const ParamVector& theta,
                                                   const Eigen::VectorXd& x,
                                                   double y) const {
  validate(theta, x);
  if (!(y > 0.0))
    throw std::domain_error("weibull-aft: log-density gradient outside support");
  const int p = covariate_dim();
  const double k = theta[p];
  const double u = std::log(y) - theta.head(p).dot(x);
  const double ew = std::exp(k * u);
  Eigen::VectorXd g(param_dim());
  g.head(p) = (k * (ew - 1.0)) * x;
  g[p] = 1.0 / k + u * (1.0 - ew);
  return g;
}

Eigen::VectorXd WeibullAftFamily::grad_log_survival(const ParamVector& theta,
                                                    const Eigen::VectorXd& x,
                                                    double y) const {
  validate(theta, x);
  const int p = covariate_dim();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(param_dim());
  if (!(y > 0.0)) return g;  // survival identically one below the support
  const double k = theta[p];
  const double u = std::log(y) - theta.head(p).dot(x);
  const double ew = std::exp(k * u);
  if (std::isinf(ew))
    throw FullyCensoredAtomError("weibull-aft: F = 1 at the evaluation point");
  g.head(p) = (k * ew) * x;
  g[p] = -u * ew;
  return g;
}

LogLikHessians WeibullAftFamily::hess_log_lik_terms(const ParamVector& theta,
                                                    const Eigen::VectorXd& x,
                                                    double y) const {
  validate(theta, x);
  if (!(y > 0.0))
    throw std::domain_error("weibull-aft: Hessian terms outside support");
  const int p = covariate_dim();
  const int q = param_dim();
  const double k = theta[p];
  const double u = std::log(y) - theta.head(p).dot(x);
  const double ew = std::exp(k * u);
  if (std::isinf(ew))
    throw FullyCensoredAtomError("weibull-aft: F = 1 at the evaluation point");

  LogLikHessians out;
  out.log_density.resize(q, q);
  out.log_survival.resize(q, q);
  const Eigen::MatrixXd xxt = x * x.transpose();

  out.log_density.topLeftCorner(p, p) = (-k * k * ew) * xxt;
  out.log_density.block(0, p, p, 1) = (k * u * ew + ew - 1.0) * x;
  out.log_density.block(p, 0, 1, p) = out.log_density.block(0, p, p, 1).transpose();
  out.log_density(p, p) = -1.0 / (k * k) - u * u * ew;

  out.log_survival.topLeftCorner(p, p) = (-k * k * ew) * xxt;
  out.log_survival.block(0, p, p, 1) = (ew * (k * u + 1.0)) * x;
  out.log_survival.block(p, 0, 1, p) = out.log_survival.block(0, p, p, 1).transpose();
  out.log_survival(p, p) = -u * u * ew;
  return out;
}

std::pair<double, double> WeibullAftFamily::quadrature_range(
    const ParamVector& theta, const Eigen::VectorXd& x, double tail_cut) const {
  const int p = covariate_dim();
  const double k = theta[p];
  const double scale = std::exp(theta.head(p).dot(x));
  // survival exp(-(y/scale)^k) drops to exp(-tail_cut^2/2) at the upper end,
  // matching the mass kept by the normal family's cut.
  const double hi = scale * std::pow(0.5 * tail_cut * tail_cut, 1.0 / k);
  return {0.0, hi};
}

}  // namespace censfit
