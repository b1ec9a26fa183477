#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>

#include "sgalab/poly.hpp"

namespace sgalab {

inline constexpr int kMaxSeriesVars = 12;

// Shared enumeration of multi-indices of total degree <= order, sorted by
// (degree, lex). Instances are cached per (nvars, order).
class IndexTable {
 public:
  using Exps = std::array<std::uint8_t, kMaxSeriesVars>;

  int nvars = 0;
  int order = 0;
  std::vector<Exps> exps;
  std::vector<int> degree;
  std::vector<int> degree_start;  // size order+2; [d, d+1) index range of degree d

  static const IndexTable& get(int nvars, int order);

  int size() const { return static_cast<int>(exps.size()); }

  static std::uint64_t pack(const Exps& e, int nvars) {
    std::uint64_t key = 0;
    for (int v = 0; v < nvars; ++v) key |= static_cast<std::uint64_t>(e[v]) << (5 * v);
    return key;
  }

  // -1 when out of range (degree beyond order)
  int position(const Exps& e) const {
    auto it = pos_.find(pack(e, nvars));
    return it == pos_.end() ? -1 : it->second;
  }

 private:
  std::unordered_map<std::uint64_t, int> pos_;
  void build();
};

// --- coefficient-ring glue -------------------------------------------------

inline double ring_scale(double c, double s) { return c * s; }
inline Poly ring_scale(const Poly& c, double s) { return c * s; }
inline XJetScalar ring_scale(const XJetScalar& c, double s) { return c * s; }

inline double coeff_max_abs(double c) { return std::abs(c); }
inline double coeff_max_abs(const Poly& c) { return c.max_abs_coeff(); }
inline double coeff_max_abs(const XJetScalar& c) { return c.max_abs(); }

// Dense polynomial in one auxiliary variable u with coefficients in C; used
// for the time dependence of spray flows before they are averaged out.
template <class C>
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(C zero) : zero_(std::move(zero)) {}
  UPoly(C zero, C constant) : zero_(std::move(zero)) {
    coeffs_.push_back(std::move(constant));
  }

  const C& zero() const { return zero_; }
  int udegree() const { return static_cast<int>(coeffs_.size()) - 1; }
  C coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return zero_;
    return coeffs_[k];
  }
  void set_coeff(int k, C value) {
    if (k >= static_cast<int>(coeffs_.size())) coeffs_.resize(k + 1, zero_);
    coeffs_[k] = std::move(value);
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    UPoly r(a.zero_);
    r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), a.zero_);
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k)
      r.coeffs_[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return r;
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) {
    UPoly r(a.zero_);
    r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), a.zero_);
    for (std::size_t k = 0; k < r.coeffs_.size(); ++k)
      r.coeffs_[k] = a.coeff(static_cast<int>(k)) - b.coeff(static_cast<int>(k));
    return r;
  }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    UPoly r(a.zero_);
    if (a.coeffs_.empty() || b.coeffs_.empty()) return r;
    r.coeffs_.resize(a.coeffs_.size() + b.coeffs_.size() - 1, a.zero_);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
        r.coeffs_[i + j] = r.coeffs_[i + j] + a.coeffs_[i] * b.coeffs_[j];
    return r;
  }
  friend UPoly ring_scale(const UPoly& a, double s) {
    UPoly r = a;
    for (auto& c : r.coeffs_) c = ring_scale(c, s);
    return r;
  }
  friend UPoly operator*(const UPoly& a, double s) { return ring_scale(a, s); }
  friend double coeff_max_abs(const UPoly& a) {
    double m = 0.0;
    for (const auto& c : a.coeffs_) m = std::max(m, coeff_max_abs(c));
    return m;
  }

  // antiderivative vanishing at u = 0
  UPoly integral_from_zero() const {
    UPoly r(zero_);
    r.coeffs_.resize(coeffs_.size() + 1, zero_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      r.coeffs_[k + 1] = ring_scale(coeffs_[k], 1.0 / static_cast<double>(k + 1));
    return r;
  }
  // definite integral over [0,1]
  C integral_unit() const {
    C acc = zero_;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      acc = acc + ring_scale(coeffs_[k], 1.0 / static_cast<double>(k + 1));
    return acc;
  }

 private:
  C zero_{};
  std::vector<C> coeffs_;
};

// Multivariate power series in the covector variables, truncated at a total
// degree, with coefficients in a commutative ring C.
template <class C>
class Series {
 public:
  Series() = default;
  Series(int nvars, int order, C zero)
      : tab_(&IndexTable::get(nvars, order)),
        zero_(std::move(zero)),
        c_(tab_->size(), zero_) {}

  static Series monomial(int nvars, int order, const std::vector<int>& exps,
                         C value, C zero) {
    Series s(nvars, order, std::move(zero));
    s.set_coeff(exps, std::move(value));
    return s;
  }

  int nvars() const { return tab_->nvars; }
  int order() const { return tab_->order; }
  const IndexTable& table() const { return *tab_; }
  const C& zero() const { return zero_; }

  const C& coeff_at(int idx) const { return c_[idx]; }
  C& coeff_at(int idx) { return c_[idx]; }

  const C& coeff(const std::vector<int>& exps) const {
    return c_[index_of(exps)];
  }
  void set_coeff(const std::vector<int>& exps, C value) {
    c_[index_of(exps)] = std::move(value);
  }

  friend Series operator+(const Series& a, const Series& b) {
    a.require_same_shape(b);
    Series r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] + b.c_[i];
    return r;
  }
  friend Series operator-(const Series& a, const Series& b) {
    a.require_same_shape(b);
    Series r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = r.c_[i] - b.c_[i];
    return r;
  }
  friend Series operator*(const Series& a, const Series& b) {
    a.require_same_shape(b);
    const IndexTable& t = *a.tab_;
    Series r(t.nvars, t.order, a.zero_);
    for (int ia = 0; ia < t.size(); ++ia) {
      if (coeff_max_abs(a.c_[ia]) == 0.0) continue;
      const int da = t.degree[ia];
      const int hi = t.degree_start[t.order - da + 1];
      for (int ib = 0; ib < hi; ++ib) {
        if (coeff_max_abs(b.c_[ib]) == 0.0) continue;
        IndexTable::Exps e = t.exps[ia];
        for (int v = 0; v < t.nvars; ++v) e[v] += t.exps[ib][v];
        const int ir = t.position(e);
        r.c_[ir] = r.c_[ir] + a.c_[ia] * b.c_[ib];
      }
    }
    return r;
  }
  friend Series ring_scale(const Series& a, double s) {
    Series r = a;
    for (auto& c : r.c_) c = ring_scale(c, s);
    return r;
  }
  friend Series operator*(const Series& a, double s) { return ring_scale(a, s); }
  friend double coeff_max_abs(const Series& a) {
    double m = 0.0;
    for (const auto& c : a.c_) m = std::max(m, coeff_max_abs(c));
    return m;
  }

  // coefficient-wise multiplication by a ring element
  Series scaled_by(const C& factor) const {
    Series r = *this;
    for (auto& c : r.c_) c = c * factor;
    return r;
  }

  Series partial(int var) const {
    const IndexTable& t = *tab_;
    Series r(t.nvars, t.order, zero_);
    for (int i = 0; i < t.size(); ++i) {
      const int e = t.exps[i][var];
      if (e == 0) continue;
      IndexTable::Exps lower = t.exps[i];
      lower[var] -= 1;
      const int j = t.position(lower);
      r.c_[j] = r.c_[j] + ring_scale(c_[i], static_cast<double>(e));
    }
    return r;
  }

  // kills all coefficients of total degree above `max_degree`
  Series truncated(int max_degree) const {
    Series r = *this;
    for (int i = 0; i < tab_->size(); ++i)
      if (tab_->degree[i] > max_degree) r.c_[i] = zero_;
    return r;
  }

  // keeps only coefficients of total degree == d
  Series graded_part(int d) const {
    Series r = *this;
    for (int i = 0; i < tab_->size(); ++i)
      if (tab_->degree[i] != d) r.c_[i] = zero_;
    return r;
  }

  // Substitute ring values for the series variables, mapping each coefficient
  // into the target ring with cmap. Monomial powers are memoized lazily so
  // sparse series only pay for what they use.
  template <class R, class CMap>
  R substitute(const std::vector<R>& values, const R& one, CMap cmap) const {
    const IndexTable& t = *tab_;
    if (static_cast<int>(values.size()) != t.nvars)
      throw invalid_input("Series::substitute: value count mismatch");
    std::unordered_map<int, R> memo;
    memo.emplace(0, one);
    std::function<const R&(int)> mono = [&](int i) -> const R& {
      auto it = memo.find(i);
      if (it != memo.end()) return it->second;
      int v = 0;
      while (t.exps[i][v] == 0) ++v;
      IndexTable::Exps lower = t.exps[i];
      lower[v] -= 1;
      const R& prev = mono(t.position(lower));
      return memo.emplace(i, prev * values[v]).first->second;
    };
    R acc = one - one;
    for (int i = 0; i < t.size(); ++i) {
      if (coeff_max_abs(c_[i]) == 0.0) continue;
      acc = acc + cmap(c_[i], mono(i));
    }
    return acc;
  }

  // Value of a scalar-coefficient series at a numeric point.
  C eval(const VectorXd& p) const {
    const IndexTable& t = *tab_;
    C acc = zero_;
    for (int i = 0; i < t.size(); ++i) {
      if (coeff_max_abs(c_[i]) == 0.0) continue;
      double m = 1.0;
      for (int v = 0; v < t.nvars; ++v)
        for (int k = 0; k < t.exps[i][v]; ++k) m *= p(v);
      acc = acc + ring_scale(c_[i], m);
    }
    return acc;
  }

  int index_of(const std::vector<int>& exps) const {
    IndexTable::Exps e{};
    if (static_cast<int>(exps.size()) != tab_->nvars)
      throw invalid_input("Series: exponent size mismatch");
    for (int v = 0; v < tab_->nvars; ++v) e[v] = static_cast<std::uint8_t>(exps[v]);
    const int idx = tab_->position(e);
    if (idx < 0) throw invalid_input("Series: monomial beyond truncation order");
    return idx;
  }

 private:
  void require_same_shape(const Series& o) const {
    if (tab_ != o.tab_) throw invalid_input("Series: shape mismatch");
  }
  const IndexTable* tab_ = nullptr;
  C zero_{};
  std::vector<C> c_;
};

inline double ring_one_like(double) { return 1.0; }
inline Poly ring_one_like(const Poly& z) { return Poly(z.nvars(), 1.0); }
inline XJetScalar ring_one_like(const XJetScalar& z) {
  return XJetScalar::constant(1.0, z.dim());
}
template <class C>
UPoly<C> ring_one_like(const UPoly<C>& z) {
  return UPoly<C>(z.zero(), ring_one_like(z.zero()));
}
template <class C>
Series<C> ring_one_like(const Series<C>& z) {
  Series<C> unit(z.nvars(), z.order(), z.zero());
  unit.coeff_at(0) = ring_one_like(z.zero());
  return unit;
}

// Composition g(f_1, ..., f_m): the inner series must have vanishing constant
// term so that truncation commutes with substitution.
template <class C>
Series<C> compose(const Series<C>& outer, const std::vector<Series<C>>& inner) {
  if (inner.empty()) throw invalid_input("compose: no inner series");
  for (const auto& f : inner)
    if (coeff_max_abs(f.coeff_at(0)) != 0.0)
      throw invalid_input("compose: inner series has nonzero constant term");
  Series<C> unit(inner[0].nvars(), inner[0].order(), outer.zero());
  unit.coeff_at(0) = ring_one_like(outer.zero());
  return outer.template substitute<Series<C>>(
      inner, unit,
      [](const C& c, const Series<C>& mono) { return mono.scaled_by(c); });
}

// Compositional inverse of a map F(p) = p + higher order (componentwise
// series in the same variables). Returns G with F(G(p)) = p mod truncation.
std::vector<Series<double>> invert_series_map(const std::vector<Series<double>>& f);

// Exact integration over u in [0,1], coefficient by coefficient.
template <class C>
Series<C> integrate_unit(const Series<UPoly<C>>& s) {
  Series<C> r(s.nvars(), s.order(), s.zero().zero());
  for (int i = 0; i < s.table().size(); ++i)
    r.coeff_at(i) = s.coeff_at(i).integral_unit();
  return r;
}

}  // namespace sgalab
