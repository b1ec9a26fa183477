#pragma once

#include "sgalab/poisson.hpp"

namespace sgalab {
namespace spray {

using poisson::PoissonStructure;

// Picard iteration for the flat spray flow dx/du = pi(x) p with p as a formal
// parameter; each sweep raises the valid p-order by one. R is the coefficient
// ring of the base point (Poly for the symbolic pipeline, XJetScalar for a
// numeric base carrying derivatives).
template <class R>
std::vector<Series<UPoly<R>>> picard_flow(const PoissonStructure& pi,
                                          const std::vector<R>& base,
                                          int order) {
  const int n = pi.dim();
  const R rzero = base[0] - base[0];
  const UPoly<R> uzero(rzero);
  const UPoly<R> uone = ring_one_like(uzero);
  using SU = Series<UPoly<R>>;
  const SU szero(n, order, uzero);

  std::vector<SU> phi(n, szero);
  for (int i = 0; i < n; ++i)
    phi[i].coeff_at(0) = UPoly<R>(rzero, base[i]);

  for (int sweep = 0; sweep < order; ++sweep) {
    std::vector<SU> next(n, szero);
    for (int i = 0; i < n; ++i) next[i].coeff_at(0) = UPoly<R>(rzero, base[i]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Poly pij = pi.entry(i, j);
        if (pij.is_zero()) continue;
        SU coeff = pij.template eval_ring<SU>(phi, ring_one_like(szero));
        // multiply by the covector variable p_j and integrate from 0 in u
        const IndexTable& t = coeff.table();
        for (int idx = 0; idx < t.size(); ++idx) {
          if (coeff_max_abs(coeff.coeff_at(idx)) == 0.0) continue;
          if (t.degree[idx] + 1 > order) continue;
          IndexTable::Exps e = t.exps[idx];
          e[j] += 1;
          const int target = t.position(e);
          next[i].coeff_at(target) =
              next[i].coeff_at(target) + coeff.coeff_at(idx).integral_from_zero();
        }
      }
    phi = next;
  }
  return phi;
}

// Q(x~, p) = time average of the spray flow over u in [0,1], symbolically in
// the base point (component i is a p-series with Poly coefficients in x~).
std::vector<Series<Poly>> spray_average_q_symbolic(const PoissonStructure& pi,
                                                   int order);

// Same averaged map at a numeric jet-seeded base point.
std::vector<Series<XJetScalar>> spray_average_q(const PoissonStructure& pi,
                                                const XJetVector& x_tilde,
                                                int order);

// Symbolic realization data: Q and its base-inverse s, plus numeric
// evaluators with Newton polish against the truncated Q.
class SprayRealization {
 public:
  SprayRealization(PoissonStructure pi, int order);

  const PoissonStructure& structure() const { return pi_; }
  int order() const { return order_; }
  int dim() const { return pi_.dim(); }
  const std::vector<Series<Poly>>& q_series() const { return q_; }
  const std::vector<Series<Poly>>& s_series() const { return s_; }

  // Q and its base Jacobian at numeric (x~, p)
  VectorXd eval_q(const VectorXd& x_tilde, const VectorXd& p) const;
  MatrixXd d_base_q(const VectorXd& x_tilde, const VectorXd& p) const;
  MatrixXd d_p_q(const VectorXd& x_tilde, const VectorXd& p) const;
  XJetVector eval_q_jet(const VectorXd& x_tilde, const VectorXd& p) const;

  // source map: series initial guess + Newton on Q(. , p) = x
  VectorXd source(const VectorXd& x, const VectorXd& p) const;
  VectorXd target(const VectorXd& x, const VectorXd& p) const;
  // jets of s with respect to x, by implicit differentiation at the solution
  XJetVector source_jet(const VectorXd& x, const VectorXd& p) const;
  XJetVector target_jet(const VectorXd& x, const VectorXd& p) const;
  MatrixXd d_p_source(const VectorXd& x, const VectorXd& p) const;

  // max |{x^i o s, x^j o s}_c - pi^{ij}(s)| at one sample
  double realization_residual(const VectorXd& x, const VectorXd& p) const;

 private:
  // p-collapsed polynomials in the base variables
  std::vector<Poly> collapse(const std::vector<Series<Poly>>& f,
                             const VectorXd& p) const;

  PoissonStructure pi_;
  int order_ = 0;
  std::vector<Series<Poly>> q_;
  std::vector<Series<Poly>> s_;
};

}  // namespace spray
}  // namespace sgalab
