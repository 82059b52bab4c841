#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "censfit/likelihood.hpp"
#include "censfit/rng.hpp"

#include "oracles.hpp"

#include <cmath>
#include <limits>

using namespace censfit;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(v.size());
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

Observation obs(std::initializer_list<double> x, double z, int delta) {
  Observation o;
  o.x = vec(x);
  o.z = z;
  o.delta = delta;
  return o;
}

// mixed censored/uncensored normal dataset at moderate residuals
Dataset random_dataset(RngStream& rng, int n, const Eigen::VectorXd& beta, double sigma,
                       double mu_c) {
  Dataset data;
  data.p = static_cast<int>(beta.size());
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = vec({1.0, rng.uniform(-5, 5)});
    const double y = rng.normal(beta.dot(x), sigma);
    const double c = rng.normal(mu_c, 1.0);
    Observation o;
    o.x = std::move(x);
    o.z = std::min(y, c);
    o.delta = y <= c ? 1 : 0;
    data.observations.push_back(std::move(o));
  }
  return data;
}
}  // namespace

TEST_CASE("single-term values") {
  NormalLinearFamily fam(2);
  const auto theta = vec({2, 1, 1});

  Dataset uncensored;
  uncensored.append(obs({1, 3}, 5.0, 1));  // z at the conditional mean
  CHECK(log_lik(fam, theta, uncensored) ==
        doctest::Approx(-0.9189385332046727418).epsilon(1e-15));

  Dataset censored;
  censored.append(obs({1, 3}, 5.0, 0));  // censored at the median
  CHECK(log_lik(fam, theta, censored) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("censored term with F == 1 contributes exactly zero") {
  NormalLinearFamily fam(2);
  const auto theta = vec({2, 1, 1});
  Dataset data;
  data.append(obs({1, 0}, 2.0 + 40.0, 0));  // 40 sigma above the mean: F == 1
  CHECK(fam.log_survival(theta, data.observations[0].x, data.observations[0].z) == -kInf);
  CHECK(log_lik(fam, theta, data) == 0.0);

  // appending such an observation leaves everything unchanged
  Dataset mixed;
  mixed.append(obs({1, 1}, 2.5, 1));
  mixed.append(obs({1, -2}, 0.5, 0));
  const double before = log_lik(fam, theta, mixed);
  const Eigen::VectorXd score_before = score(fam, theta, mixed);
  const Eigen::MatrixXd info_before = observed_information(fam, theta, mixed);
  mixed.append(obs({1, 0}, 42.0, 0));
  CHECK(log_lik(fam, theta, mixed) == before);
  CHECK((score(fam, theta, mixed) - score_before).norm() == 0.0);
  CHECK((observed_information(fam, theta, mixed) - info_before).norm() == 0.0);
}

TEST_CASE("uncensored reduction: matches the closed-form normal log-likelihood") {
  RngStream rng(7, 0);
  NormalLinearFamily fam(2);
  const auto beta = vec({2, 1});
  const double sigma = 1.0;

  Dataset data;
  data.p = 2;
  Eigen::MatrixXd x(50, 2);
  Eigen::VectorXd z(50);
  for (int i = 0; i < 50; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = rng.uniform(-5, 5);
    z[i] = rng.normal(beta.dot(x.row(i)), sigma);
    data.append(obs({x(i, 0), x(i, 1)}, z[i], 1));
  }
  const auto theta = vec({2, 1, 1});
  const double direct = oracles::normal_loglik(x, z, beta, sigma);
  CHECK(log_lik(fam, theta, data) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("additivity over concatenation") {
  RngStream rng(8, 0);
  NormalLinearFamily fam(2);
  const auto theta = vec({1.5, -0.5, 1.2});
  Dataset a = random_dataset(rng, 37, vec({1.5, -0.5}), 1.2, 2.0);
  Dataset b = random_dataset(rng, 23, vec({1.5, -0.5}), 1.2, 2.0);
  Dataset both = a;
  for (const auto& o : b.observations) both.observations.push_back(o);
  CHECK(log_lik(fam, theta, both) ==
        doctest::Approx(log_lik(fam, theta, a) + log_lik(fam, theta, b)).epsilon(1e-15));
}

TEST_CASE("score matches finite differences of log_lik") {
  RngStream rng(9, 0);
  NormalLinearFamily fam(2);
  const Dataset data = random_dataset(rng, 60, vec({1, 2}), 1.0, 2.0);
  const auto theta = vec({0.8, 1.9, 1.1});

  const Eigen::VectorXd s = score(fam, theta, data);
  const Eigen::VectorXd fd = oracles::fd_gradient(
      [&](const Eigen::VectorXd& t) { return log_lik(fam, t, data); }, theta);
  // per-observation scale: n terms, so compare on the mean scale
  const Eigen::VectorXd s_mean = s / data.size(), fd_mean = fd / data.size();
  CHECK(oracles::max_rel_err(s_mean, fd_mean) < 1e-6);

  // uncensored z at the mean: beta components vanish
  Dataset at_mean;
  at_mean.append(obs({1, 3}, 5.0, 1));
  const Eigen::VectorXd s0 = score(fam, vec({2, 1, 1}), at_mean);
  CHECK(std::abs(s0[0]) < 1e-14);
  CHECK(std::abs(s0[1]) < 1e-14);
}

TEST_CASE("observed information matches finite differences of the score") {
  RngStream rng(10, 0);
  NormalLinearFamily fam(2);
  const Dataset data = random_dataset(rng, 60, vec({1, 2}), 1.0, 2.0);
  const auto theta = vec({1.1, 2.05, 0.95});

  const Eigen::MatrixXd info = observed_information(fam, theta, data);
  const Eigen::MatrixXd fd = -oracles::fd_jacobian(
      [&](const Eigen::VectorXd& t) { return Eigen::VectorXd(score(fam, t, data)); }, theta);
  const Eigen::MatrixXd info_mean = info / data.size(), fd_mean = fd / data.size();
  CHECK(oracles::max_rel_err(info_mean, fd_mean) < 1e-5);
  CHECK((info - info.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gaussian information: beta block is X'X/sigma^2 for uncensored data") {
  RngStream rng(11, 0);
  NormalLinearFamily fam(2);
  const double sigma = 1.7;
  Dataset data;
  data.p = 2;
  Eigen::MatrixXd x(40, 2);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = rng.uniform(-5, 5);
    data.append(obs({x(i, 0), x(i, 1)}, rng.normal(0.0, 1.0), 1));
  }
  const Eigen::MatrixXd info = observed_information(fam, vec({0, 0, sigma}), data);
  const Eigen::MatrixXd expected = (x.transpose() * x) / (sigma * sigma);
  CHECK((info.topLeftCorner(2, 2) - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("per-observation scores sum to the score") {
  RngStream rng(12, 0);
  NormalLinearFamily fam(2);
  const Dataset data = random_dataset(rng, 25, vec({1, 2}), 1.0, 2.0);
  const auto theta = vec({1, 2, 1});
  const auto terms = per_observation_scores(fam, theta, data);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(3);
  for (const auto& t : terms) total += t;
  CHECK((total - score(fam, theta, data)).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("misspecified data yields -inf, not an exception") {
  WeibullAftFamily fam(1);
  Dataset data;
  data.append(obs({1}, -2.0, 1));  // negative time under a positive-support law
  CHECK(log_lik(fam, vec({0, 1}), data) == -kInf);
}

TEST_CASE("input contract violations") {
  NormalLinearFamily fam(2);
  Dataset empty;
  CHECK_THROWS_AS(log_lik(fam, vec({1, 2, 1}), empty), std::invalid_argument);

  Dataset wrong_dim;
  wrong_dim.append(obs({1}, 0.0, 1));
  CHECK_THROWS_AS(log_lik(fam, vec({1, 2, 1}), wrong_dim), std::invalid_argument);

  Dataset data;
  data.append(obs({1, 0}, 1.0, 1));
  CHECK_THROWS_AS(data.append(obs({1, 0, 3}, 1.0, 1)), std::invalid_argument);
  Observation bad = obs({1, 0}, 1.0, 2);
  CHECK_THROWS_AS(data.append(bad), std::invalid_argument);
  CHECK_THROWS_AS(log_lik(fam, vec({1, 2, -1}), data), std::domain_error);
}
