#include "censfit/likelihood.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace censfit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_data(const Family& fam, const Dataset& data) {
  if (data.observations.empty())
    throw std::invalid_argument("dataset is empty");
  if (data.p != fam.covariate_dim())
    throw std::invalid_argument("dataset covariate dimension " + std::to_string(data.p) +
                                " does not match family dimension " +
                                std::to_string(fam.covariate_dim()));
}
}  // namespace

void Dataset::append(Observation obs) {
  if (observations.empty() && p == 0) p = static_cast<int>(obs.x.size());
  if (obs.x.size() != p)
    throw std::invalid_argument("observation covariate length " +
                                std::to_string(obs.x.size()) +
                                " does not match dataset dimension " + std::to_string(p));
  if (obs.delta != 0 && obs.delta != 1)
    throw std::invalid_argument("censoring indicator must be 0 or 1");
  if (!std::isfinite(obs.z))
    throw std::invalid_argument("observed time must be finite");
  observations.push_back(std::move(obs));
}

double Dataset::censoring_rate() const {
  if (observations.empty()) return 0.0;
  double censored = 0.0;
  for (const auto& o : observations) censored += (o.delta == 0);
  return censored / static_cast<double>(observations.size());
}

void KahanSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

double log_lik(const Family& fam, const ParamVector& theta, const Dataset& data) {
  check_data(fam, data);
  KahanSum acc;
  for (const auto& obs : data.observations) {
    if (obs.delta == 1) {
      const double lf = fam.log_density(theta, obs.x, obs.z);
      if (lf == -kInf) return -kInf;  // model cannot explain this observation
      acc.add(lf);
    } else {
      const double ls = fam.log_survival(theta, obs.x, obs.z);
      if (ls == -kInf) continue;  // F == 1: the term is defined to be zero
      acc.add(ls);
    }
  }
  return acc.value();
}

std::vector<Eigen::VectorXd> per_observation_scores(const Family& fam,
                                                    const ParamVector& theta,
                                                    const Dataset& data) {
  check_data(fam, data);
  const int q = fam.param_dim();
  std::vector<Eigen::VectorXd> terms;
  terms.reserve(data.observations.size());
  for (const auto& obs : data.observations) {
    if (obs.delta == 1) {
      terms.push_back(fam.grad_log_density(theta, obs.x, obs.z));
    } else if (fam.log_survival(theta, obs.x, obs.z) == -kInf) {
      terms.push_back(Eigen::VectorXd::Zero(q));  // zeroed term: flat in theta
    } else {
      terms.push_back(fam.grad_log_survival(theta, obs.x, obs.z));
    }
  }
  return terms;
}

Eigen::VectorXd score(const Family& fam, const ParamVector& theta, const Dataset& data) {
  check_data(fam, data);
  const int q = fam.param_dim();
  std::vector<KahanSum> acc(q);
  for (const auto& obs : data.observations) {
    Eigen::VectorXd g;
    if (obs.delta == 1) {
      g = fam.grad_log_density(theta, obs.x, obs.z);
    } else {
      if (fam.log_survival(theta, obs.x, obs.z) == -kInf) continue;
      g = fam.grad_log_survival(theta, obs.x, obs.z);
    }
    for (int r = 0; r < q; ++r) acc[r].add(g[r]);
  }
  Eigen::VectorXd s(q);
  for (int r = 0; r < q; ++r) s[r] = acc[r].value();
  return s;
}

Eigen::MatrixXd observed_information(const Family& fam, const ParamVector& theta,
                                     const Dataset& data) {
  check_data(fam, data);
  const int q = fam.param_dim();
  std::vector<KahanSum> acc(q * q);
  for (const auto& obs : data.observations) {
    Eigen::MatrixXd h;
    if (obs.delta == 1) {
      h = fam.hess_log_lik_terms(theta, obs.x, obs.z).log_density;
    } else {
      if (fam.log_survival(theta, obs.x, obs.z) == -kInf) continue;
      h = fam.hess_log_lik_terms(theta, obs.x, obs.z).log_survival;
    }
    for (int r = 0; r < q; ++r)
      for (int s = 0; s < q; ++s) acc[r * q + s].add(h(r, s));
  }
  Eigen::MatrixXd info(q, q);
  for (int r = 0; r < q; ++r)
    for (int s = 0; s < q; ++s) info(r, s) = -acc[r * q + s].value();
  return info;
}

}  // namespace censfit
