#include "sgalab/poly.hpp"

#include <cmath>

namespace sgalab {

Poly Poly::monomial(const std::vector<int>& exps, double coeff, int nvars) {
  Poly p(nvars);
  p.add_term(exps, coeff);
  return p;
}

void Poly::add_term(const std::vector<int>& exps, double coeff) {
  if (static_cast<int>(exps.size()) != nvars_)
    throw invalid_input("Poly: exponent size mismatch");
  std::uint64_t key = 0;
  for (int v = 0; v < nvars_; ++v) {
    if (exps[v] < 0 || exps[v] > 255) throw invalid_input("Poly: bad exponent");
    key |= static_cast<std::uint64_t>(exps[v]) << (8 * v);
  }
  terms_[key] += coeff;
  if (terms_[key] == 0.0) terms_.erase(key);
}

bool Poly::is_zero(double tol) const {
  for (const auto& [k, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_)
    if (c != 0.0) d = std::max(d, key_degree(k));
  return d;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [k, c] : o.terms_) {
    auto& slot = terms_[k];
    slot += c;
    if (slot == 0.0) terms_.erase(k);
  }
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [k, c] : o.terms_) {
    auto& slot = terms_[k];
    slot -= c;
    if (slot == 0.0) terms_.erase(k);
  }
  return *this;
}

Poly operator-(const Poly& a) {
  Poly r(a.nvars_);
  for (const auto& [k, c] : a.terms_) r.terms_[k] = -c;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r(a.nvars_);
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_) {
      const std::uint64_t k = ka + kb;  // no per-variable overflow at sane degrees
      auto& slot = r.terms_[k];
      slot += ca * cb;
      if (slot == 0.0) r.terms_.erase(k);
    }
  return r;
}

Poly operator*(double s, Poly a) {
  if (s == 0.0) {
    a.terms_.clear();
    return a;
  }
  for (auto& [k, c] : a.terms_) c *= s;
  return a;
}

Poly Poly::derivative(int var) const {
  Poly r(nvars_);
  for (const auto& [k, c] : terms_) {
    const int e = exponent(k, var);
    if (e == 0) continue;
    r.terms_[k - key_of_var(var)] += c * e;
  }
  return r;
}

double Poly::eval(const VectorXd& x) const {
  double acc = 0.0;
  for (const auto& [k, c] : terms_) {
    double t = c;
    for (int v = 0; v < nvars_; ++v) {
      const int e = exponent(k, v);
      for (int i = 0; i < e; ++i) t *= x(v);
    }
    acc += t;
  }
  return acc;
}

XJetScalar Poly::eval_jet(const XJetVector& x) const {
  const int n = x.empty() ? 0 : x[0].dim();
  XJetScalar acc(n);
  for (const auto& [k, c] : terms_) {
    XJetScalar t = XJetScalar::constant(c, n);
    for (int v = 0; v < nvars_; ++v) {
      const int e = exponent(k, v);
      for (int i = 0; i < e; ++i) t = t * x[v];
    }
    acc += t;
  }
  return acc;
}

void Poly::prune(double tol) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= tol)
      it = terms_.erase(it);
    else
      ++it;
  }
}

double Poly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace sgalab
