#pragma once

#include "censfit/family.hpp"

#include <Eigen/Core>

#include <vector>

namespace censfit {

struct Observation {
  Eigen::VectorXd x;  // covariates, length p
  double z;           // observed time, min(y, c)
  int delta;          // 1 = uncensored, 0 = censored
};

struct Dataset {
  std::vector<Observation> observations;
  int p = 0;

  int size() const { return static_cast<int>(observations.size()); }
  void append(Observation obs);
  double censoring_rate() const;
};

// Neumaier-compensated accumulator: term order is fixed at dataset order, so
// log-likelihood values are reproducible bit for bit across runs and thread
// counts. All likelihood reductions below are sequential by contract.
class KahanSum {
 public:
  void add(double v);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Censored log-likelihood: sum of delta*log f + (1-delta)*log(1-F), where a
// censored term whose CDF evaluates to one in floating point contributes
// exactly zero (the factor with the censoring indicator is checked first).
// Returns -inf when some uncensored observation has zero density.
double log_lik(const Family& fam, const ParamVector& theta, const Dataset& data);

// Score s_n = D log_lik, with the same zero rule for F == 1 terms.
Eigen::VectorXd score(const Family& fam, const ParamVector& theta, const Dataset& data);

// Per-observation score contributions (zero vector for zeroed terms).
std::vector<Eigen::VectorXd> per_observation_scores(const Family& fam,
                                                    const ParamVector& theta,
                                                    const Dataset& data);

// Observed information -D s_n, assembled from the per-term Hessians of
// log f and log(1-F); symmetric by construction.
Eigen::MatrixXd observed_information(const Family& fam, const ParamVector& theta,
                                     const Dataset& data);

}  // namespace censfit
