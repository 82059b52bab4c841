#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>

namespace censfit {

struct QuadConfig {
  double abs_tolerance = 1e-8;
  int max_subdivisions = 200;
  // Integration ranges for unbounded laws are truncated at this many
  // standard deviations; with Gaussian decay the discarded mass is far
  // below abs_tolerance for the default of 12.
  double tail_cut = 12.0;
};

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  int subdivisions = 0;
};

struct QuadVecResult {
  Eigen::VectorXd value;
  double error = 0.0;
  bool converged = true;
  int subdivisions = 0;
};

// Globally adaptive Gauss-Kronrod 15(7) on [a,b]: the interval with the
// largest error estimate is bisected until the summed error drops below
// abs_tolerance or the subdivision budget runs out. Fully deterministic
// (worst-first with positional tie-breaking, left-to-right final sum).
//
// A NaN integrand value throws QuadratureError. An infinite value is
// propagated: the result carries that infinity with converged=false, since
// some callers (the KL information) have +inf in their codomain.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadConfig& cfg = {});

// Same scheme for a vector-valued integrand (component-wise max-abs error).
// f must fill `out` (already sized to dim).
QuadVecResult integrate_vec(const std::function<void(double, Eigen::VectorXd& out)>& f,
                            int dim, double a, double b, const QuadConfig& cfg = {});

// Fixed composite Gauss-Legendre rule used for covariate averaging; exact
// for smooth integrands at the panel resolution and deterministic.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels = 10);

}  // namespace censfit
