#pragma once

#include <cstdint>
#include <map>

#include "sgalab/jets.hpp"

namespace sgalab {

// Sparse polynomial in up to 8 real variables with double coefficients.
// Exponents are packed 8 bits per variable into a 64-bit key, so monomial
// degree per variable is capped at 255 (far beyond anything needed here).
class Poly {
 public:
  Poly() = default;
  explicit Poly(int nvars) : nvars_(nvars) { check_nvars(nvars); }
  Poly(int nvars, double constant) : nvars_(nvars) {
    check_nvars(nvars);
    if (constant != 0.0) terms_[0] = constant;
  }

  static Poly variable(int i, int nvars) {
    Poly p(nvars);
    p.terms_[key_of_var(i)] = 1.0;
    return p;
  }
  static Poly monomial(const std::vector<int>& exps, double coeff, int nvars);
  static Poly monomial_from_key(std::uint64_t key, double coeff, int nvars) {
    Poly p(nvars);
    if (coeff != 0.0) p.terms_[key] = coeff;
    return p;
  }

  int nvars() const { return nvars_; }
  bool is_zero(double tol = 0.0) const;
  int degree() const;
  const std::map<std::uint64_t, double>& terms() const { return terms_; }

  void add_term(const std::vector<int>& exps, double coeff);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(double s, Poly a);
  friend Poly operator*(Poly a, double s) { return s * std::move(a); }

  Poly derivative(int var) const;

  double eval(const VectorXd& x) const;
  XJetScalar eval_jet(const XJetVector& x) const;

  // Evaluation over any commutative ring; `one` supplies the multiplicative
  // identity (rings here carry runtime shape: dimension, truncation order).
  template <class R>
  R eval_ring(const std::vector<R>& x, const R& one) const {
    R acc = one - one;  // zero of the right shape
    for (const auto& [key, coeff] : terms_) {
      R term = one * coeff;
      for (int v = 0; v < nvars_; ++v) {
        const int e = exponent(key, v);
        for (int k = 0; k < e; ++k) term = term * x[v];
      }
      acc = acc + term;
    }
    return acc;
  }

  void prune(double tol = 0.0);
  double max_abs_coeff() const;

  static int exponent(std::uint64_t key, int var) {
    return static_cast<int>((key >> (8 * var)) & 0xffull);
  }
  static std::uint64_t key_of_var(int var) { return 1ull << (8 * var); }
  static int key_degree(std::uint64_t key) {
    int d = 0;
    while (key != 0) {
      d += static_cast<int>(key & 0xffull);
      key >>= 8;
    }
    return d;
  }

 private:
  static void check_nvars(int nvars) {
    if (nvars < 0 || nvars > 8) throw invalid_input("Poly: nvars must be in [0,8]");
  }
  int nvars_ = 0;
  std::map<std::uint64_t, double> terms_;
};

}  // namespace sgalab
