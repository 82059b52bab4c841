#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "censfit/optimize.hpp"
#include "censfit/rng.hpp"

#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

using namespace censfit;

namespace {
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

Dataset uncensored_normal(RngStream& rng, int n, const Eigen::VectorXd& beta, double sigma) {
  Dataset data;
  data.p = static_cast<int>(beta.size());
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = vec({1.0, rng.uniform(-5, 5)});
    const double z = rng.normal(beta.dot(x), sigma);
    data.append(obs({x[0], x[1]}, z, 1));
  }
  return data;
}

Dataset censored_normal(RngStream& rng, int n, const Eigen::VectorXd& beta, double sigma,
                        double mu_c) {
  Dataset data;
  data.p = static_cast<int>(beta.size());
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = vec({1.0, rng.uniform(-5, 5)});
    const double y = rng.normal(beta.dot(x), sigma);
    const double c = rng.normal(mu_c, 1.0);
    data.append(obs({x[0], x[1]}, std::min(y, c), y <= c ? 1 : 0));
  }
  return data;
}

Eigen::MatrixXd design(const Dataset& data) {
  Eigen::MatrixXd x(data.size(), data.p);
  for (int i = 0; i < data.size(); ++i) x.row(i) = data.observations[i].x;
  return x;
}

Eigen::VectorXd times(const Dataset& data) {
  Eigen::VectorXd z(data.size());
  for (int i = 0; i < data.size(); ++i) z[i] = data.observations[i].z;
  return z;
}
}  // namespace

TEST_CASE("uncensored normal data: matches the closed-form OLS/MLE solution") {
  RngStream rng(31, 0);
  NormalLinearFamily fam(2);
  for (int inst = 0; inst < 100; ++inst) {
    const int n = inst % 2 == 0 ? 10 : 100;
    const Eigen::VectorXd beta = vec({rng.uniform(-3, 3), rng.uniform(-3, 3)});
    const double sigma = rng.uniform(0.3, 3.0);
    const Dataset data = uncensored_normal(rng, n, beta, sigma);
    const oracles::OlsFit ols = oracles::ols_mle(design(data), times(data));

    const FitResult fr = fit(fam, data);
    REQUIRE(fr.converged);
    CHECK((fr.theta_hat.head(2) - ols.beta).lpNorm<Eigen::Infinity>() < 1e-8);
    CHECK(std::abs(fr.theta_hat[2] - ols.sigma_mle) < 1e-8);
  }
}

TEST_CASE("default init is OLS, so uncensored fits converge in a few steps") {
  RngStream rng(32, 0);
  NormalLinearFamily fam(2);
  const Dataset data = uncensored_normal(rng, 100, vec({1, 2}), 1.0);
  const FitResult fr = fit(fam, data);
  CHECK(fr.converged);
  CHECK(fr.iterations <= 3);
}

TEST_CASE("default init edge rules") {
  NormalLinearFamily fam(1);
  Dataset one;
  one.append(obs({1}, 4.2, 1));
  const ParamVector init = default_init(fam, one);
  CHECK(init[0] == doctest::Approx(4.2).epsilon(1e-15));
  CHECK(init[1] == doctest::Approx(1e-3).epsilon(1e-15));  // sigma floor

  Dataset all_censored;
  all_censored.append(obs({1}, 1.0, 0));
  all_censored.append(obs({1}, 2.0, 0));
  CHECK_THROWS_AS(default_init(fam, all_censored), IdentifiabilityError);
  CHECK_THROWS_AS(fit(fam, all_censored), IdentifiabilityError);
}

TEST_CASE("rank-deficient design is an identifiability error") {
  NormalLinearFamily fam(2);
  Dataset data;
  for (int i = 0; i < 10; ++i) data.append(obs({1.0, 2.0}, static_cast<double>(i), 1));
  CHECK_THROWS_AS(fit(fam, data), IdentifiabilityError);
}

TEST_CASE("single observation with externally fixed sigma") {
  NormalLinearFamily fam(1, 1.0);
  Dataset one;
  one.append(obs({1}, 2.71828, 1));
  const FitResult fr = fit(fam, one);
  CHECK(fr.converged);
  CHECK(fr.theta_hat[0] == doctest::Approx(2.71828).epsilon(1e-15));
}

TEST_CASE("impossible observation at the start raises InitializationError") {
  WeibullAftFamily fam(1);
  Dataset data;
  data.append(obs({1}, 1.5, 1));
  data.append(obs({1}, -2.0, 1));  // outside the support: zero density
  data.append(obs({1}, 0.7, 1));
  try {
    fit(fam, data);
    FAIL("expected InitializationError");
  } catch (const InitializationError& e) {
    CHECK(e.observation_index == 1);
    CHECK(std::string(e.what()).find("observation 1") != std::string::npos);
  }
}

TEST_CASE("non-convergence is reported, best iterate returned") {
  // zero residuals: sigma runs to the boundary, no interior maximum
  NormalLinearFamily fam(1);
  Dataset data;
  data.append(obs({1}, 1.0, 1));
  data.append(obs({1}, 1.0, 1));
  FitConfig cfg;
  cfg.max_iterations = 40;
  const FitResult fr = fit(fam, data, cfg);
  CHECK_FALSE(fr.converged);
  CHECK(fr.theta_hat[1] > 0.0);
  CHECK(fr.theta_hat[1] < 1e-3);  // moved from the floored init toward 0
}

TEST_CASE("censored fit recovers the truth at simulation scale") {
  RngStream rng(33, 0);
  NormalLinearFamily fam(2);
  const Eigen::VectorXd theta0 = vec({1, 2, 1});
  const Dataset data = censored_normal(rng, 500, theta0.head(2), theta0[2], 9.0);
  CHECK(data.censoring_rate() > 0.04);
  CHECK(data.censoring_rate() < 0.16);

  const FitResult fr = fit(fam, data);
  REQUIRE(fr.converged);
  // within 5 asymptotic standard deviations of the truth
  CHECK(std::abs(fr.theta_hat[0] - 1.0) < 5.0 * 0.045);
  CHECK(std::abs(fr.theta_hat[1] - 2.0) < 5.0 * 0.016);
  CHECK(std::abs(fr.theta_hat[2] - 1.0) < 5.0 * 0.032);
  CHECK(fr.gradient_norm <= 1e-8);

  // first-order optimality on the mean-score scale
  const Eigen::VectorXd s = score(fam, fr.theta_hat, data);
  CHECK(s.lpNorm<Eigen::Infinity>() < 1e-6 * data.size());

  // observed information positive semidefinite at the optimum
  const Eigen::MatrixXd info = observed_information(fam, fr.theta_hat, data);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-6 * info.trace() / 3.0);
}

TEST_CASE("weibull fit recovers simulated AFT data") {
  RngStream rng(34, 0);
  WeibullAftFamily fam(2);
  const double k0 = 1.5;
  const Eigen::VectorXd beta0 = vec({0.5, 0.8});
  Dataset data;
  data.p = 2;
  for (int i = 0; i < 800; ++i) {
    Eigen::VectorXd x = vec({1.0, rng.uniform(-1, 1)});
    // inverse-CDF Weibull draw
    const double u = rng.uniform01();
    const double y = std::exp(beta0.dot(x)) * std::pow(-std::log1p(-u), 1.0 / k0);
    const double c = std::exp(rng.normal(1.2, 0.8));
    data.append(obs({x[0], x[1]}, std::min(y, c), y <= c ? 1 : 0));
  }
  const FitResult fr = fit(fam, data);
  REQUIRE(fr.converged);
  CHECK(std::abs(fr.theta_hat[0] - beta0[0]) < 0.15);
  CHECK(std::abs(fr.theta_hat[1] - beta0[1]) < 0.15);
  CHECK(std::abs(fr.theta_hat[2] - k0) < 0.2);
}

TEST_CASE("observation order does not change the fit") {
  RngStream rng(35, 0);
  NormalLinearFamily fam(2);
  Dataset data = censored_normal(rng, 200, vec({1, 2}), 1.0, 2.0);
  const FitResult a = fit(fam, data);

  Dataset reversed = data;
  std::reverse(reversed.observations.begin(), reversed.observations.end());
  const FitResult b = fit(fam, reversed);
  CHECK((a.theta_hat - b.theta_hat).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("explicit init is honored and validated") {
  RngStream rng(36, 0);
  NormalLinearFamily fam(2);
  const Dataset data = uncensored_normal(rng, 50, vec({1, 2}), 1.0);
  FitConfig cfg;
  cfg.init = vec({0, 0, 5});
  const FitResult fr = fit(fam, data, cfg);
  CHECK(fr.converged);

  cfg.init = vec({0, 0, -1});
  CHECK_THROWS_AS(fit(fam, data, cfg), std::domain_error);
}
