#pragma once

#include "censfit/likelihood.hpp"

#include <optional>
#include <stdexcept>

namespace censfit {

// Degenerate data: all observations censored, or rank-deficient design.
struct IdentifiabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The log-likelihood is -inf at the starting point; carries the index of the
// first offending observation (dataset order, zero-based).
struct InitializationError : std::runtime_error {
  InitializationError(const std::string& msg, int index)
      : std::runtime_error(msg), observation_index(index) {}
  int observation_index;
};

struct FitConfig {
  int max_iterations = 200;
  double grad_tolerance = 1e-8;    // on the mean-score scale ||s_n||_inf / n
  double step_tolerance = 1e-10;   // relative parameter change
  double line_search_shrink = 0.5;
  std::optional<ParamVector> init;
};

struct FitResult {
  ParamVector theta_hat;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // ||s_n||_inf / n at theta_hat
};

// Least-squares based starting point (censoring ignored); positive
// components floored away from the boundary.
ParamVector default_init(const Family& fam, const Dataset& data);

// Maximizes the censored log-likelihood by damped Newton steps on an
// unconstrained reparameterization (log of the positive components), with a
// backtracking gradient-ascent fallback whenever the transformed observed
// information is not positive definite. Accepted iterates have nondecreasing
// log-likelihood.
FitResult fit(const Family& fam, const Dataset& data, const FitConfig& config = {});

}  // namespace censfit
