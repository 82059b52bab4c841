#include "censfit/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace censfit {

namespace {

// QUADPACK dqk15 abscissae and weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// 10-point Gauss-Legendre on [-1,1] for the fixed covariate rule.
constexpr double kGl10X[5] = {0.148874338981631210884826001130, 0.433395394129247190799265943166,
                              0.679409568299024406234327365115, 0.865063366688984510732096688423,
                              0.973906528517171720077964012084};
constexpr double kGl10W[5] = {0.295524224714752870173892994651, 0.269266719309996355091226921569,
                              0.219086362515982043995534934228, 0.149451349150580593145776339658,
                              0.066671344308688137593568809893};

struct Interval {
  double a, b;
  Eigen::VectorXd value;
  double error;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

using VecFn = std::function<void(double, Eigen::VectorXd&)>;

// GK15 on one interval; returns false if an infinite node value was seen
// (value then holds the signed infinity).
bool gk15(const VecFn& f, double a, double b, int dim, Eigen::VectorXd& value,
          double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  Eigen::VectorXd fx(dim), kronrod = Eigen::VectorXd::Zero(dim),
                  gauss = Eigen::VectorXd::Zero(dim);
  bool finite = true;

  auto accumulate = [&](double x, double wk, double wgauss) {
    f(x, fx);
    for (int i = 0; i < dim; ++i) {
      if (std::isnan(fx[i]))
        throw QuadratureError("quadrature: integrand evaluated to NaN");
      if (std::isinf(fx[i])) {
        value = fx;
        finite = false;
        return;
      }
    }
    kronrod += wk * fx;
    if (wgauss != 0.0) gauss += wgauss * fx;
  };

  for (int j = 0; j < 7 && finite; ++j) {
    const double dx = half * kXgk[j];
    const double wgauss = (j % 2 == 1) ? kWg[j / 2] : 0.0;
    accumulate(center - dx, kWgk[j], wgauss);
    if (finite) accumulate(center + dx, kWgk[j], wgauss);
  }
  if (finite) accumulate(center, kWgk[7], kWg[3]);
  if (!finite) return false;

  kronrod *= half;
  gauss *= half;
  error = (kronrod - gauss).cwiseAbs().maxCoeff();
  value = std::move(kronrod);
  return true;
}

QuadVecResult adapt(const VecFn& f, int dim, double a, double b, const QuadConfig& cfg) {
  QuadVecResult res;
  res.value = Eigen::VectorXd::Zero(dim);
  if (a == b) return res;

  std::vector<Interval> segs;
  Eigen::VectorXd v(dim);
  double e = 0.0;
  if (!gk15(f, a, b, dim, v, e)) {
    res.value = v;
    res.error = kInf;
    res.converged = false;
    return res;
  }
  segs.push_back({a, b, std::move(v), e});

  auto total_error = [&] {
    double t = 0.0;
    for (const auto& s : segs) t += s.error;
    return t;
  };

  while (total_error() > cfg.abs_tolerance &&
         res.subdivisions < cfg.max_subdivisions) {
    // worst interval; ties broken by left endpoint for determinism
    std::size_t worst = 0;
    for (std::size_t i = 1; i < segs.size(); ++i) {
      if (segs[i].error > segs[worst].error ||
          (segs[i].error == segs[worst].error && segs[i].a < segs[worst].a))
        worst = i;
    }
    const Interval seg = segs[worst];
    const double mid = 0.5 * (seg.a + seg.b);
    if (mid <= seg.a || mid >= seg.b) break;  // interval no longer splittable

    Eigen::VectorXd vl(dim), vr(dim);
    double el = 0.0, er = 0.0;
    if (!gk15(f, seg.a, mid, dim, vl, el) || !gk15(f, mid, seg.b, dim, vr, er)) {
      res.value = std::isinf(vl.cwiseAbs().maxCoeff()) ? vl : vr;
      res.error = kInf;
      res.converged = false;
      return res;
    }
    segs[worst] = {seg.a, mid, std::move(vl), el};
    segs.push_back({mid, seg.b, std::move(vr), er});
    ++res.subdivisions;
  }

  std::sort(segs.begin(), segs.end(),
            [](const Interval& l, const Interval& r) { return l.a < r.a; });
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  for (const auto& s : segs) sum += s.value;
  res.value = std::move(sum);
  res.error = total_error();
  res.converged = res.error <= cfg.abs_tolerance;
  return res;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadConfig& cfg) {
  auto wrapped = [&f](double x, Eigen::VectorXd& out) { out[0] = f(x); };
  const QuadVecResult r = adapt(wrapped, 1, a, b, cfg);
  return {r.value[0], r.error, r.converged, r.subdivisions};
}

QuadVecResult integrate_vec(const std::function<void(double, Eigen::VectorXd&)>& f,
                            int dim, double a, double b, const QuadConfig& cfg) {
  return adapt(f, dim, a, b, cfg);
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels) {
  double sum = 0.0;
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double center = lo + 0.5 * width, half = 0.5 * width;
    for (int j = 0; j < 5; ++j) {
      sum += kGl10W[j] * (f(center - half * kGl10X[j]) + f(center + half * kGl10X[j]));
    }
  }
  return sum * 0.5 * width;
}

}  // namespace censfit
