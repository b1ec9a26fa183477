#include "sgalab/spray.hpp"

namespace sgalab {
namespace spray {

namespace {

// substitute base values (outer-ring series) into the Poly coefficients of a
// symbolic p-series; p-variables stay put
Series<Poly> subst_base(const Series<Poly>& f, const std::vector<Series<Poly>>& base) {
  const int nvars = f.nvars();
  const int order = f.order();
  const Poly pzero(base[0].zero().nvars());
  Series<Poly> out(nvars, order, pzero);
  const Series<Poly> one = ring_one_like(out);
  const IndexTable& t = f.table();
  for (int idx = 0; idx < t.size(); ++idx) {
    const Poly& c = f.coeff_at(idx);
    if (c.is_zero()) continue;
    Series<Poly> evaluated = c.eval_ring<Series<Poly>>(base, one);
    // shift by the p-monomial of idx
    const IndexTable& te = evaluated.table();
    for (int j = 0; j < te.size(); ++j) {
      if (coeff_max_abs(evaluated.coeff_at(j)) == 0.0) continue;
      if (te.degree[j] + t.degree[idx] > order) continue;
      IndexTable::Exps e = te.exps[j];
      for (int v = 0; v < nvars; ++v) e[v] += t.exps[idx][v];
      const int target = te.position(e);
      out.coeff_at(target) = out.coeff_at(target) + evaluated.coeff_at(j);
    }
  }
  return out;
}

}  // namespace

std::vector<Series<Poly>> spray_average_q_symbolic(const PoissonStructure& pi,
                                                   int order) {
  const int n = pi.dim();
  std::vector<Poly> base;
  base.reserve(n);
  for (int i = 0; i < n; ++i) base.push_back(Poly::variable(i, n));
  auto phi = picard_flow<Poly>(pi, base, order);
  std::vector<Series<Poly>> q;
  q.reserve(n);
  for (int i = 0; i < n; ++i) q.push_back(integrate_unit(phi[i]));
  return q;
}

std::vector<Series<XJetScalar>> spray_average_q(const PoissonStructure& pi,
                                                const XJetVector& x_tilde,
                                                int order) {
  if (order < 1) throw invalid_input("spray_average_q: order must be >= 1");
  auto phi = picard_flow<XJetScalar>(pi, x_tilde, order);
  std::vector<Series<XJetScalar>> q;
  q.reserve(pi.dim());
  for (int i = 0; i < pi.dim(); ++i) q.push_back(integrate_unit(phi[i]));
  return q;
}

SprayRealization::SprayRealization(PoissonStructure pi, int order)
    : pi_(std::move(pi)), order_(order) {
  if (order_ < 1) throw invalid_input("SprayRealization: order must be >= 1");
  const int n = pi_.dim();
  q_ = spray_average_q_symbolic(pi_, order_);

  // invert Q in its base argument: s = x - tail(s, p) with tail = Q - base
  const Poly pzero(n);
  std::vector<Series<Poly>> tail(n, Series<Poly>(n, order_, pzero));
  for (int i = 0; i < n; ++i) {
    tail[i] = q_[i];
    tail[i].coeff_at(0) = pzero;
  }
  std::vector<Series<Poly>> s(n, Series<Poly>(n, order_, pzero));
  for (int i = 0; i < n; ++i) s[i].coeff_at(0) = Poly::variable(i, n);
  for (int sweep = 0; sweep < order_; ++sweep) {
    std::vector<Series<Poly>> next(n, Series<Poly>(n, order_, pzero));
    for (int i = 0; i < n; ++i) {
      next[i].coeff_at(0) = Poly::variable(i, n);
      next[i] = next[i] - subst_base(tail[i], s);
    }
    s = next;
  }
  s_ = std::move(s);
}

std::vector<Poly> SprayRealization::collapse(const std::vector<Series<Poly>>& f,
                                             const VectorXd& p) const {
  std::vector<Poly> out;
  out.reserve(f.size());
  for (const auto& comp : f) out.push_back(comp.eval(p));
  return out;
}

VectorXd SprayRealization::eval_q(const VectorXd& x_tilde, const VectorXd& p) const {
  const auto collapsed = collapse(q_, p);
  VectorXd v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = collapsed[i].eval(x_tilde);
  return v;
}

MatrixXd SprayRealization::d_base_q(const VectorXd& x_tilde, const VectorXd& p) const {
  const auto collapsed = collapse(q_, p);
  MatrixXd m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m(i, j) = collapsed[i].derivative(j).eval(x_tilde);
  return m;
}

MatrixXd SprayRealization::d_p_q(const VectorXd& x_tilde, const VectorXd& p) const {
  MatrixXd m(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) m(i, j) = q_[i].partial(j).eval(p).eval(x_tilde);
  return m;
}

XJetVector SprayRealization::eval_q_jet(const VectorXd& x_tilde,
                                        const VectorXd& p) const {
  const auto collapsed = collapse(q_, p);
  XJetVector seed;
  for (int i = 0; i < dim(); ++i)
    seed.push_back(XJetScalar::variable(x_tilde(i), i, dim()));
  XJetVector out;
  out.reserve(dim());
  for (int i = 0; i < dim(); ++i) out.push_back(collapsed[i].eval_jet(seed));
  return out;
}

VectorXd SprayRealization::source(const VectorXd& x, const VectorXd& p) const {
  const auto collapsed = collapse(q_, p);
  VectorXd z(dim());
  for (int i = 0; i < dim(); ++i) z(i) = s_[i].eval(p).eval(x);
  for (int it = 0; it < 50; ++it) {
    VectorXd residual(dim());
    MatrixXd jac(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
      residual(i) = collapsed[i].eval(z) - x(i);
      for (int j = 0; j < dim(); ++j) jac(i, j) = collapsed[i].derivative(j).eval(z);
    }
    if (residual.cwiseAbs().maxCoeff() < 1e-13) return z;
    z -= jac.lu().solve(residual);
  }
  throw domain_error("outside local domain");
}

VectorXd SprayRealization::target(const VectorXd& x, const VectorXd& p) const {
  return source(x, -p);
}

XJetVector SprayRealization::source_jet(const VectorXd& x, const VectorXd& p) const {
  const VectorXd z = source(x, p);
  const auto collapsed = collapse(q_, p);
  XJetVector seed;
  for (int i = 0; i < dim(); ++i)
    seed.push_back(XJetScalar::variable(z(i), i, dim()));
  XJetVector fjets;
  fjets.reserve(dim());
  for (int i = 0; i < dim(); ++i) fjets.push_back(collapsed[i].eval_jet(seed));
  return jet_inverse(fjets, z);
}

XJetVector SprayRealization::target_jet(const VectorXd& x, const VectorXd& p) const {
  return source_jet(x, -p);
}

MatrixXd SprayRealization::d_p_source(const VectorXd& x, const VectorXd& p) const {
  const VectorXd z = source(x, p);
  const MatrixXd dq = d_base_q(z, p);
  const MatrixXd dqp = d_p_q(z, p);
  return -MatrixXd(dq.lu().solve(dqp));
}

double SprayRealization::realization_residual(const VectorXd& x,
                                              const VectorXd& p) const {
  const XJetVector sj = source_jet(x, p);
  const MatrixXd dsp = d_p_source(x, p);
  VectorXd s_val(dim());
  MatrixXd dsx(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    s_val(i) = sj[i].value;
    dsx.row(i) = sj[i].grad.transpose();
  }
  const MatrixXd pi_at_s = pi_.eval(s_val);
  double worst = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      double bracket = 0.0;
      for (int k = 0; k < dim(); ++k)
        bracket += dsx(i, k) * dsp(j, k) - dsp(i, k) * dsx(j, k);
      worst = std::max(worst, std::abs(bracket - pi_at_s(i, j)));
    }
  return worst;
}

}  // namespace spray
}  // namespace sgalab
