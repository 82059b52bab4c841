#include "censfit/optimize.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cassert>
#include <cmath>
#include <limits>

namespace censfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijoSlope = 1e-4;
constexpr double kDivergenceBound = 1e8;

Eigen::MatrixXd design_matrix(const Dataset& data) {
  Eigen::MatrixXd x(data.size(), data.p);
  for (int i = 0; i < data.size(); ++i) x.row(i) = data.observations[i].x;
  return x;
}

void check_identifiable(const Dataset& data) {
  bool any_uncensored = false;
  for (const auto& obs : data.observations) any_uncensored |= (obs.delta == 1);
  if (!any_uncensored)
    throw IdentifiabilityError("all observations are censored; the likelihood has no density term");
  const Eigen::MatrixXd x = design_matrix(data);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < data.p)
    throw IdentifiabilityError("covariate design matrix is rank-deficient (rank " +
                               std::to_string(qr.rank()) + " < " + std::to_string(data.p) + ")");
}

int first_invalid_observation(const Family& fam, const ParamVector& theta,
                              const Dataset& data) {
  for (int i = 0; i < data.size(); ++i) {
    const auto& obs = data.observations[i];
    if (obs.delta == 1 && fam.log_density(theta, obs.x, obs.z) == -kInf) return i;
  }
  return -1;
}

// theta <-> unconstrained eta (log on the positive components)
ParamVector to_eta(const ParamVector& theta, const std::vector<int>& pos) {
  ParamVector eta = theta;
  for (int i : pos) eta[i] = std::log(theta[i]);
  return eta;
}

ParamVector to_theta(const ParamVector& eta, const std::vector<int>& pos) {
  ParamVector theta = eta;
  for (int i : pos) theta[i] = std::exp(eta[i]);
  return theta;
}

}  // namespace

ParamVector default_init(const Family& fam, const Dataset& data) {
  if (data.observations.empty()) throw std::invalid_argument("dataset is empty");
  check_identifiable(data);
  const int n = data.size();
  const int p = data.p;
  const Eigen::MatrixXd x = design_matrix(data);

  if (const auto* normal = dynamic_cast<const NormalLinearFamily*>(&fam)) {
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z[i] = data.observations[i].z;
    const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(z);
    if (normal->sigma_fixed()) return beta;
    const double ssr = (z - x * beta).squaredNorm();
    const double sd = std::sqrt(ssr / std::max(n - p, 1));
    ParamVector theta(p + 1);
    theta.head(p) = beta;
    theta[p] = std::max(sd, 1e-3);
    return theta;
  }

  if (dynamic_cast<const WeibullAftFamily*>(&fam) != nullptr) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      const auto& obs = data.observations[i];
      if (obs.delta == 1 && obs.z > 0.0) idx.push_back(i);
    }
    if (idx.empty())
      throw IdentifiabilityError("no uncensored observation inside the support");
    Eigen::MatrixXd xs(idx.size(), p);
    Eigen::VectorXd logz(idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
      xs.row(j) = data.observations[idx[j]].x;
      logz[j] = std::log(data.observations[idx[j]].z);
    }
    ParamVector theta(p + 1);
    theta.head(p) = xs.colPivHouseholderQr().solve(logz);
    theta[p] = 1.0;
    return theta;
  }

  throw std::invalid_argument("default_init: unsupported family " + fam.name());
}

FitResult fit(const Family& fam, const Dataset& data, const FitConfig& config) {
  if (data.observations.empty()) throw std::invalid_argument("dataset is empty");
  check_identifiable(data);

  const int n = data.size();
  const int q = fam.param_dim();
  const std::vector<int> pos = fam.positive_params();

  ParamVector theta = config.init ? *config.init : default_init(fam, data);
  fam.validate(theta, Eigen::VectorXd::Zero(fam.covariate_dim()));

  double loglik = log_lik(fam, theta, data);
  if (loglik == -kInf) {
    const int bad = first_invalid_observation(fam, theta, data);
    throw InitializationError("log-likelihood is -inf at the initial point (observation " +
                                  std::to_string(bad) + " has zero density)",
                              bad);
  }

  ParamVector eta = to_eta(theta, pos);
  FitResult result;
  result.theta_hat = theta;
  result.loglik = loglik;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    const Eigen::VectorXd s = score(fam, theta, data);
    result.gradient_norm = s.lpNorm<Eigen::Infinity>() / n;
    if (result.gradient_norm <= config.grad_tolerance) {
      result.converged = true;
      break;
    }

    // transform score and information to the unconstrained scale
    Eigen::VectorXd jac = Eigen::VectorXd::Ones(q);
    for (int i : pos) jac[i] = theta[i];
    Eigen::VectorXd g = s.cwiseProduct(jac);
    Eigen::MatrixXd info = observed_information(fam, theta, data);
    info = jac.asDiagonal() * info * jac.asDiagonal();
    for (int i : pos) info(i, i) -= s[i] * theta[i];

    // Newton direction when the information is positive definite and the
    // direction is an ascent direction; otherwise plain gradient ascent.
    Eigen::VectorXd direction;
    bool newton = false;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() == Eigen::Success) {
      direction = llt.solve(g);
      newton = direction.dot(g) > 0.0 && direction.allFinite();
    }
    if (!newton) direction = g / (1.0 + g.lpNorm<Eigen::Infinity>());

    // backtracking line search (Armijo)
    const double slope = direction.dot(g);
    double step = 1.0;
    bool accepted = false;
    ParamVector eta_new, theta_new;
    double loglik_new = -kInf;
    while (step > 1e-16) {
      eta_new = eta + step * direction;
      theta_new = to_theta(eta_new, pos);
      if (theta_new.allFinite() && fam.in_admissible_set(theta_new)) {
        loglik_new = log_lik(fam, theta_new, data);
        if (loglik_new >= loglik + kArmijoSlope * step * slope && loglik_new > -kInf) {
          accepted = true;
          break;
        }
      }
      step *= config.line_search_shrink;
    }
    if (!accepted) break;  // no ascent possible at this scale

    assert(loglik_new >= loglik);
    const double rel_change =
        (theta_new - theta).lpNorm<Eigen::Infinity>() / (1.0 + theta.lpNorm<Eigen::Infinity>());
    eta = eta_new;
    theta = theta_new;
    loglik = loglik_new;
    result.theta_hat = theta;
    result.loglik = loglik;
    result.iterations = iter + 1;

    if (theta.lpNorm<Eigen::Infinity>() > kDivergenceBound) break;  // diverging iterates
    if (rel_change <= config.step_tolerance) {
      const Eigen::VectorXd s_final = score(fam, theta, data);
      result.gradient_norm = s_final.lpNorm<Eigen::Infinity>() / n;
      result.converged = result.gradient_norm <= config.grad_tolerance;
      break;
    }
  }

  if (!result.converged) {
    const Eigen::VectorXd s_final = score(fam, theta, data);
    result.gradient_norm = s_final.lpNorm<Eigen::Infinity>() / n;
    result.converged = result.gradient_norm <= config.grad_tolerance;
  }
  return result;
}

}  // namespace censfit
