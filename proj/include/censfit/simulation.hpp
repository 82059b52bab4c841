#pragma once

#include "censfit/likelihood.hpp"
#include "censfit/optimize.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace censfit {

// One Monte Carlo setting: covariates x = (1, u) with u ~ U(-5,5), response
// N(beta0'x, sigma0^2), censoring N(mu_c, censoring_sd^2).
struct Scenario {
  std::string family = "normal-linear";
  Eigen::VectorXd beta0;
  double sigma0 = 1.0;
  double mu_c = 0.0;
  double censoring_sd = 1.0;
  int n = 100;
  int replications = 100;
  std::uint64_t seed = 0;

  void validate() const;
  ParamVector theta0() const;  // (beta0..., sigma0) in packing order
};

struct ParameterSummary {
  double true_value = 0.0;
  double mean_estimate = 0.0;
  double bias = 0.0;
  double std_dev = 0.0;
  double mse = 0.0;
};

struct ReplicationReport {
  std::vector<ParameterSummary> parameters;
  double mean_censoring_rate = 0.0;
  int failures = 0;      // non-converged fits, excluded from the aggregates
  int replications = 0;  // total attempted
};

// Deterministic dataset for one replication: the stream is keyed by
// (seed, n, replication_index) only, so any replication can be regenerated
// in isolation and thread count cannot matter.
Dataset generate(const Scenario& scenario, int replication_index);

// Runs all replications (optionally in parallel), fits each with the default
// configuration and aggregates over the converged fits. Identical scenarios
// produce bit-identical reports for any thread count.
ReplicationReport run_study(const Scenario& scenario, int threads = 1);

// Flat key-value scenario file. Documented keys: family, beta0, sigma0,
// mu_c, censoring_sd, n, replications, seed; '#' starts a comment. The n key
// may list several sample sizes, yielding one scenario per size.
std::vector<Scenario> parse_scenario_file(const std::string& path);

}  // namespace censfit
