#pragma once

#include <vector>

#include "sgalab/linalg.hpp"

namespace sgalab {

// Order-2 jet in the base-point variables: value, x-gradient, x-Hessian.
// The p-direction bookkeeping lives in the series layer; this type only
// propagates derivatives with respect to the n base coordinates.
struct XJetScalar {
  double value = 0.0;
  VectorXd grad;   // length n
  MatrixXd hess;   // n x n, symmetric

  XJetScalar() = default;
  explicit XJetScalar(int n)
      : value(0.0), grad(VectorXd::Zero(n)), hess(MatrixXd::Zero(n, n)) {}
  XJetScalar(double v, int n)
      : value(v), grad(VectorXd::Zero(n)), hess(MatrixXd::Zero(n, n)) {}

  int dim() const { return static_cast<int>(grad.size()); }

  // i-th coordinate function evaluated at x
  static XJetScalar variable(double v, int i, int n) {
    XJetScalar j(v, n);
    j.grad(i) = 1.0;
    return j;
  }
  static XJetScalar constant(double v, int n) { return XJetScalar(v, n); }

  XJetScalar& operator+=(const XJetScalar& o) {
    value += o.value;
    grad += o.grad;
    hess += o.hess;
    return *this;
  }
  XJetScalar& operator-=(const XJetScalar& o) {
    value -= o.value;
    grad -= o.grad;
    hess -= o.hess;
    return *this;
  }
  friend XJetScalar operator+(XJetScalar a, const XJetScalar& b) { return a += b; }
  friend XJetScalar operator-(XJetScalar a, const XJetScalar& b) { return a -= b; }
  friend XJetScalar operator-(const XJetScalar& a) {
    XJetScalar r = a;
    r.value = -r.value;
    r.grad = -r.grad;
    r.hess = -r.hess;
    return r;
  }
  friend XJetScalar operator*(const XJetScalar& a, const XJetScalar& b) {
    XJetScalar r(a.dim());
    r.value = a.value * b.value;
    r.grad = a.value * b.grad + b.value * a.grad;
    r.hess = a.value * b.hess + b.value * a.hess +
             a.grad * b.grad.transpose() + b.grad * a.grad.transpose();
    return r;
  }
  friend XJetScalar operator*(double s, XJetScalar a) {
    a.value *= s;
    a.grad *= s;
    a.hess *= s;
    return a;
  }
  friend XJetScalar operator*(XJetScalar a, double s) { return s * a; }

  double max_abs() const {
    double m = std::abs(value);
    if (grad.size() > 0) m = std::max(m, grad.cwiseAbs().maxCoeff());
    if (hess.size() > 0) m = std::max(m, hess.cwiseAbs().maxCoeff());
    return m;
  }
};

using XJetVector = std::vector<XJetScalar>;

// Chain rule: f is a jet in its own base coordinates z (f.value = f(z0),
// f.grad = df/dz, ...), args are jets of z_i(x) with values z0. Returns the
// jet of f(z(x)) in x.
XJetScalar jet_compose(const XJetScalar& f, const XJetVector& args);

// Jets of the inverse map. f[i] are the jets of F_i at z* (so f[i].value is
// the i-th component of y* = F(z*)); returns jets of G = F^{-1} at y*, in the
// y-variables, computed by implicit differentiation.
XJetVector jet_inverse(const XJetVector& f, const VectorXd& z_star);

}  // namespace sgalab
