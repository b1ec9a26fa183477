#include "sgalab/cocycles.hpp"

#include <cmath>

namespace sgalab {
namespace cocycles {

using densities::AlphaDensity;
using densities::LinearCanonicalRelation;
using densities::ShortExactPresentation;
using groupoid::solve_triple_chart;
using groupoid::TripleChart;

namespace {

complexd eval_pair(const Series<Poly>& re, const Series<Poly>& im,
                   const VectorXd& p, const VectorXd& x) {
  return complexd(re.eval(p).eval(x), im.eval(p).eval(x));
}

constexpr double kZeroTol = 1e-300;

void require_nonzero(const complexd& v) {
  if (std::abs(v) < kZeroTol)
    throw domain_error("cocycle undefined (zero value)");
}

// canonical symplectic matrix in (x, p) block order, omega = dp ^ dx
MatrixXd canonical_omega(int n) {
  MatrixXd w = MatrixXd::Zero(2 * n, 2 * n);
  w.topRightCorner(n, n) = -MatrixXd::Identity(n, n);
  w.bottomLeftCorner(n, n) = MatrixXd::Identity(n, n);
  return w;
}

// tangent frame of the composable-pair space in the J-chart: columns over
// (dp1, dp2, dx), rows (x1, p1, x2, p2)
MatrixXd pair_tangent_frame(const GeneratingFunction::Jet& j, int n) {
  MatrixXd m = MatrixXd::Zero(4 * n, 3 * n);
  // x1 = d_{p1} S
  m.block(0, 0, n, n) = j.dp1dp1;
  m.block(0, n, n, n) = j.dp1dp2;
  m.block(0, 2 * n, n, n) = j.dxdp1.transpose();
  // p1
  m.block(n, 0, n, n) = MatrixXd::Identity(n, n);
  // x2 = d_{p2} S
  m.block(2 * n, 0, n, n) = j.dp1dp2.transpose();
  m.block(2 * n, n, n, n) = j.dp2dp2;
  m.block(2 * n, 2 * n, n, n) = j.dxdp2.transpose();
  // p2
  m.block(3 * n, n, n, n) = MatrixXd::Identity(n, n);
  return m;
}

// tangent frame of gr(m) inside (GxG) x G, columns over (dp1, dp2, dx)
MatrixXd graph_m_tangent_frame(const GeneratingFunction::Jet& j, int n) {
  MatrixXd m = MatrixXd::Zero(6 * n, 3 * n);
  m.topRows(4 * n) = pair_tangent_frame(j, n);
  // x3 = x
  m.block(4 * n, 2 * n, n, n) = MatrixXd::Identity(n, n);
  // p3 = d_x S
  m.block(5 * n, 0, n, n) = j.dxdp1;
  m.block(5 * n, n, n, n) = j.dxdp2;
  m.block(5 * n, 2 * n, n, n) = j.dxdx;
  return m;
}

// differentials of source and target at (x, p), blocks (d/dx | d/dp)
void source_differential(const GeneratingFunction& s, const VectorXd& x,
                         const VectorXd& p, MatrixXd& dsx, MatrixXd& dsp) {
  const int n = s.dim();
  const auto j = s.jet(p, VectorXd::Zero(n), x);
  dsx = j.dxdp2.transpose();
  dsp = j.dp1dp2.transpose();
}

void target_differential(const GeneratingFunction& s, const VectorXd& x,
                         const VectorXd& p, MatrixXd& dtx, MatrixXd& dtp) {
  const int n = s.dim();
  const auto j = s.jet(VectorXd::Zero(n), p, x);
  dtx = j.dxdp1.transpose();
  dtp = j.dp1dp2;
}

// mu_sigma at the base point y for sigma with J-chart value f gamma, through
// the quotient along the composability sequence at the unit pair
complexd mu_sigma_value(const Cochain2Eval& f, const GeneratingFunction& s,
                        const VectorXd& y) {
  const int n = s.dim();
  const VectorXd zero = VectorXd::Zero(n);
  const auto j = s.jet(zero, zero, y);
  const MatrixXd frame = pair_tangent_frame(j, n);

  ShortExactPresentation pres;
  pres.ambient_dim = 4 * n;
  pres.basis_v1 = frame;
  pres.complement = nullspace(frame.transpose());
  MatrixXd dsx, dsp, dtx, dtp;
  source_differential(s, y, zero, dsx, dsp);
  target_differential(s, y, zero, dtx, dtp);
  MatrixXd proj(n, 4 * n);
  proj << dsx, dsp, -dtx, -dtp;
  pres.projection = proj;

  const AlphaDensity lambda_pair = AlphaDensity::on_identity_basis(0.5, 4 * n, 1.0);
  const complexd f_at_unit = f(zero, zero, y);
  require_nonzero(f_at_unit);
  const AlphaDensity sigma_pair =
      AlphaDensity::on_identity_basis(0.5, 3 * n, f_at_unit);
  const AlphaDensity mu = densities::quotient_density(lambda_pair, sigma_pair, pres);
  return mu.eval(MatrixXd::Identity(n, n));
}

}  // namespace

complexd PolyCochain1::eval(const VectorXd& x, const VectorXd& p) const {
  return eval_pair(re, im, p, x);
}

complexd PolyCochain2::eval(const VectorXd& p1, const VectorXd& p2,
                            const VectorXd& x) const {
  VectorXd joint(p1.size() + p2.size());
  joint << p1, p2;
  return eval_pair(re, im, joint, x);
}

Cochain2Eval PolyCochain2::evaluator() const {
  return [copy = *this](const VectorXd& p1, const VectorXd& p2, const VectorXd& x) {
    return copy.eval(p1, p2, x);
  };
}

PolyCochain1 zero_cochain1(int n, int order) {
  return {Series<Poly>(n, order, Poly(n)), Series<Poly>(n, order, Poly(n))};
}

PolyCochain2 zero_cochain2(int n, int order) {
  return {Series<Poly>(2 * n, order, Poly(n)), Series<Poly>(2 * n, order, Poly(n))};
}

complexd delta_mult(const Cochain2Eval& f, const GeneratingFunction& s,
                    const VectorXd& p1, const VectorXd& p2, const VectorXd& p3,
                    const VectorXd& x) {
  const TripleChart c = solve_triple_chart(s, p1, p2, p3, x);
  const complexd f23 = f(p2, p3, c.x_tilde);
  const complexd f12_3 = f(c.p_bar, p3, x);
  const complexd f1_23 = f(p1, c.p_tilde, x);
  const complexd f12 = f(p1, p2, c.x_bar);
  require_nonzero(f12_3);
  require_nonzero(f12);
  return f23 * f1_23 / (f12_3 * f12);
}

complexd delta_add(const Cochain2Eval& h, const GeneratingFunction& s,
                   const VectorXd& p1, const VectorXd& p2, const VectorXd& p3,
                   const VectorXd& x) {
  const TripleChart c = solve_triple_chart(s, p1, p2, p3, x);
  return h(p2, p3, c.x_tilde) - h(c.p_bar, p3, x) + h(p1, c.p_tilde, x) -
         h(p1, p2, c.x_bar);
}

complexd delta_mult1(const Cochain1Eval& kappa, const GeneratingFunction& s,
                     const PairChart& chart) {
  const auto j = s.jet(chart.p1, chart.p2, chart.x);
  const complexd denom = kappa(chart.x, j.dx);
  require_nonzero(denom);
  return kappa(j.dp1, chart.p1) * kappa(j.dp2, chart.p2) / denom;
}

complexd delta_add1(const Cochain1Eval& h, const GeneratingFunction& s,
                    const PairChart& chart) {
  const auto j = s.jet(chart.p1, chart.p2, chart.x);
  return h(j.dp1, chart.p1) + h(j.dp2, chart.p2) - h(chart.x, j.dx);
}

UnitPropagationResidual unit_propagation_residual(const Cochain2Eval& f,
                                                  const GeneratingFunction& s,
                                                  const VectorXd& x,
                                                  const VectorXd& p) {
  const int n = s.dim();
  const VectorXd zero = VectorXd::Zero(n);
  const VectorXd src = s.source(x, p);
  const VectorXd tgt = s.target(x, p);
  UnitPropagationResidual out;
  out.left_unit = std::abs(f(zero, p, x) - f(zero, zero, tgt));
  out.right_unit = std::abs(f(p, zero, x) - f(zero, zero, src));
  const complexd at_t = f(zero, zero, tgt);
  require_nonzero(at_t);
  const complexd lhs = f(p, -p, tgt);
  const complexd rhs = f(zero, zero, src) / at_t * f(-p, p, src);
  out.inverse = std::abs(lhs - rhs);
  return out;
}

IdentityAxiomResidual identity_axiom_residual(const Cochain2Eval& f,
                                              const GeneratingFunction& s,
                                              const spray::SprayRealization& spray,
                                              const VectorXd& x, const VectorXd& p) {
  const int n = s.dim();
  const VectorXd zero = VectorXd::Zero(n);
  const MatrixXd w = canonical_omega(n);
  MatrixXd w_pair = MatrixXd::Zero(4 * n, 4 * n);
  w_pair.topLeftCorner(2 * n, 2 * n) = w;
  w_pair.bottomRightCorner(2 * n, 2 * n) = w;

  IdentityAxiomResidual out;

  auto compose_with_unit = [&](bool unit_on_right) {
    const VectorXd base = unit_on_right ? s.source(x, p) : s.target(x, p);
    const complexd mu_val = mu_sigma_value(f, s, base);

    // id x unit (or unit x id) as a linear canonical relation
    LinearCanonicalRelation rel1;
    rel1.omega1 = w;
    rel1.omega2 = w_pair;
    MatrixXd basis1 = MatrixXd::Zero(6 * n, 3 * n);
    basis1.block(0, 0, 2 * n, 2 * n) = MatrixXd::Identity(2 * n, 2 * n);
    if (unit_on_right) {
      basis1.block(2 * n, 0, 2 * n, 2 * n) = MatrixXd::Identity(2 * n, 2 * n);
      basis1.block(4 * n, 2 * n, n, n) = MatrixXd::Identity(n, n);  // unit tangent
    } else {
      basis1.block(4 * n, 0, 2 * n, 2 * n) = MatrixXd::Identity(2 * n, 2 * n);
      basis1.block(2 * n, 2 * n, n, n) = MatrixXd::Identity(n, n);
    }
    rel1.basis_l = basis1;
    const AlphaDensity s1 = AlphaDensity::on_identity_basis(0.5, 3 * n, mu_val);

    // graph of the multiplication at the pair (g, 1) or (1, g)
    const PairChart chart =
        unit_on_right ? PairChart{p, zero, x} : PairChart{zero, p, x};
    const auto j = s.jet(chart.p1, chart.p2, chart.x);
    LinearCanonicalRelation rel2;
    rel2.omega1 = w_pair;
    rel2.omega2 = w;
    rel2.basis_l = graph_m_tangent_frame(j, n);
    const double gamma = groupoid::gamma_s(s, spray, chart);
    const complexd sigma_val = f(chart.p1, chart.p2, chart.x) * gamma;
    const AlphaDensity s2 = AlphaDensity::on_identity_basis(0.5, 3 * n, sigma_val);

    const auto composed = densities::compose_enhanced_linear(rel1, s1, rel2, s2);
    // expect the graph of the identity with the Liouville enhancement
    const MatrixXd& b = composed.relation.basis_l;
    const MatrixXd top = b.topRows(2 * n);
    const MatrixXd bottom = b.bottomRows(2 * n);
    const double graph_defect = (top - bottom).cwiseAbs().maxCoeff();
    const complexd lam = densities::liouville_half_density(w).eval(top);
    const complexd val = composed.density.eval(MatrixXd::Identity(2 * n, 2 * n));
    return graph_defect + std::abs(val / lam - 1.0);
  };

  out.right = compose_with_unit(true);
  out.left = compose_with_unit(false);

  // mu_sigma must equal mu / f(1,1) on the coordinate frame
  const VectorXd y = s.source(x, p);
  const complexd mu_val = mu_sigma_value(f, s, y);
  out.mu = std::abs(mu_val * f(zero, zero, y) - 1.0);
  return out;
}

VanEstSplit symmetry_and_vanest0(const Cochain2Eval& h, const VectorXd& x,
                                 double tol, double fd_step) {
  const int n = static_cast<int>(x.size());
  Eigen::MatrixXcd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      VectorXd ei = VectorXd::Zero(n), ej = VectorXd::Zero(n);
      ei(i) = fd_step;
      ej(j) = fd_step;
      const complexd pp = h(ei, ej, x), pm = h(ei, -ej, x);
      const complexd mp = h(-ei, ej, x), mm = h(-ei, -ej, x);
      b(i, j) = (pp - pm - mp + mm) / (4.0 * fd_step * fd_step);
    }
  VanEstSplit out;
  const Eigen::MatrixXcd sym = 0.5 * (b + b.transpose().eval());
  const Eigen::MatrixXcd skew = 0.5 * (b - b.transpose().eval());
  out.symmetric = sym.real();
  out.skew = skew.real();
  out.symmetric_pass = skew.cwiseAbs().maxCoeff() < tol;
  return out;
}

VanEstSplit symmetry_and_vanest0(const PolyCochain2& h, const VectorXd& x,
                                 double tol) {
  const int n2 = h.re.nvars();
  const int n = n2 / 2;
  Eigen::MatrixXcd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> e(n2, 0);
      e[i] = 1;
      e[n + j] = 1;
      b(i, j) = complexd(h.re.coeff(e).eval(x), h.im.coeff(e).eval(x));
    }
  VanEstSplit out;
  const Eigen::MatrixXcd sym = 0.5 * (b + b.transpose().eval());
  const Eigen::MatrixXcd skew = 0.5 * (b - b.transpose().eval());
  out.symmetric = sym.real();
  out.skew = skew.real();
  out.symmetric_pass = skew.cwiseAbs().maxCoeff() < tol;
  return out;
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

void require_normalized(const PolyCochain2& h) {
  const int n2 = h.re.nvars();
  const int n = n2 / 2;
  const IndexTable& t = h.re.table();
  for (int idx = 0; idx < t.size(); ++idx) {
    int da = 0, db = 0;
    for (int v = 0; v < n; ++v) {
      da += t.exps[idx][v];
      db += t.exps[idx][n + v];
    }
    if (da >= 1 && db >= 1) continue;
    if (!h.re.coeff_at(idx).is_zero(1e-13) || !h.im.coeff_at(idx).is_zero(1e-13))
      throw invalid_input("coboundary solver: cochain is not normalized");
  }
}

// solve delta_0 h' = h for one real series; shared by both parts
bool solve_pi0_part(const Series<Poly>& h, int max_degree, Series<Poly>& out,
                    double& residual, int& failed_degree) {
  const int n2 = h.nvars();
  const int n = n2 / 2;
  const IndexTable& t2 = h.table();
  const IndexTable& t1 = out.table();
  bool ok = true;
  for (int k = 2; k <= max_degree; ++k) {
    std::vector<int> rows, cols;
    for (int idx = t2.degree_start[k]; idx < t2.degree_start[k + 1]; ++idx) {
      int da = 0;
      for (int v = 0; v < n; ++v) da += t2.exps[idx][v];
      const int db = t2.degree[idx] - da;
      if (da >= 1 && db >= 1) rows.push_back(idx);
    }
    for (int idx = t1.degree_start[k]; idx < t1.degree_start[k + 1]; ++idx)
      cols.push_back(idx);
    if (rows.empty()) continue;

    MatrixXd a = MatrixXd::Zero(rows.size(), cols.size());
    std::map<int, int> row_of;
    for (std::size_t r = 0; r < rows.size(); ++r)
      row_of[rows[r]] = static_cast<int>(r);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto exps = t1.exps[cols[c]];
      // delta_0 p^a = p1^a + p2^a - (p1+p2)^a; only mixed terms survive
      std::function<void(int, IndexTable::Exps, double)> expand =
          [&](int v, IndexTable::Exps acc, double coeff) {
            if (v == n) {
              IndexTable::Exps e2{};
              int da = 0;
              for (int w = 0; w < n; ++w) {
                e2[w] = acc[w];
                e2[n + w] = static_cast<std::uint8_t>(exps[w] - acc[w]);
                da += acc[w];
              }
              const int db = k - da;
              if (da < 1 || db < 1) return;
              auto it = row_of.find(t2.position(e2));
              if (it != row_of.end()) a(it->second, static_cast<int>(c)) -= coeff;
              return;
            }
            for (int e = 0; e <= exps[v]; ++e) {
              IndexTable::Exps next = acc;
              next[v] = static_cast<std::uint8_t>(e);
              expand(v + 1, next, coeff * binom(exps[v], e));
            }
          };
      expand(0, IndexTable::Exps{}, 1.0);
    }

    std::map<std::uint64_t, VectorXd> rhs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Poly& c = h.coeff_at(rows[r]);
      for (const auto& [key, coeff] : c.terms()) {
        auto it = rhs.find(key);
        if (it == rhs.end())
          it = rhs.emplace(key, VectorXd::Zero(rows.size())).first;
        it->second(static_cast<int>(r)) = coeff;
      }
    }
    for (const auto& [key, b] : rhs) {
      const LsqResult sol = solve_least_squares(a, b);
      residual = std::max(residual, sol.residual);
      if (sol.residual > 1e-10 * std::max(1.0, b.norm())) {
        ok = false;
        if (failed_degree < 0) failed_degree = k;
      }
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (sol.solution(static_cast<int>(c)) == 0.0) continue;
        Poly& slot = out.coeff_at(cols[c]);
        slot += Poly::monomial_from_key(key, sol.solution(static_cast<int>(c)), n);
      }
    }
  }
  return ok;
}

}  // namespace

PolyCochain2 delta0_of(const PolyCochain1& h1, int order2) {
  const int n = h1.re.nvars();
  const Poly pzero(n);
  PolyCochain2 out = zero_cochain2(n, order2);
  std::vector<Series<Poly>> p1v, p2v, psum, xconst;
  for (int i = 0; i < n; ++i) {
    Series<Poly> a(2 * n, order2, pzero), b(2 * n, order2, pzero);
    std::vector<int> e(2 * n, 0);
    e[i] = 1;
    a.set_coeff(e, Poly(n, 1.0));
    e[i] = 0;
    e[n + i] = 1;
    b.set_coeff(e, Poly(n, 1.0));
    p1v.push_back(a);
    p2v.push_back(b);
    psum.push_back(a + b);
    Series<Poly> xc(2 * n, order2, pzero);
    xc.coeff_at(0) = Poly::variable(i, n);
    xconst.push_back(xc);
  }
  out.re = groupoid::substitute_series(h1.re, p1v, xconst) +
           groupoid::substitute_series(h1.re, p2v, xconst) -
           groupoid::substitute_series(h1.re, psum, xconst);
  out.im = groupoid::substitute_series(h1.im, p1v, xconst) +
           groupoid::substitute_series(h1.im, p2v, xconst) -
           groupoid::substitute_series(h1.im, psum, xconst);
  return out;
}

CoboundaryResult coboundary_solve_pi0(const PolyCochain2& h, int max_degree) {
  require_normalized(h);
  const int n = h.re.nvars() / 2;
  CoboundaryResult out;
  out.primitive = zero_cochain1(n, std::min(max_degree, h.re.order()));
  out.failed_degree = -1;
  const bool ok_re = solve_pi0_part(h.re, std::min(max_degree, h.re.order()),
                                    out.primitive.re, out.residual,
                                    out.failed_degree);
  const bool ok_im = solve_pi0_part(h.im, std::min(max_degree, h.im.order()),
                                    out.primitive.im, out.residual,
                                    out.failed_degree);
  out.success = ok_re && ok_im;
  if (!out.success) {
    // the degree-two obstruction is the skew mixed part
    const VanEstSplit split = symmetry_and_vanest0(h, VectorXd::Zero(n));
    out.obstruction_skew = split.skew;
  }
  return out;
}

PolyCochain2 delta1_symbolic(const PolyCochain1& h1, const GeneratingFunction& s) {
  const int n = s.dim();
  const int order = s.order();
  const Poly pzero(n);
  std::vector<Series<Poly>> x1, x2, pprod, p1v, p2v, xbase;
  for (int i = 0; i < n; ++i) {
    x1.push_back(s.series_data().partial(i));
    x2.push_back(s.series_data().partial(n + i));
    Series<Poly> dx = s.series_data();
    for (int idx = 0; idx < dx.table().size(); ++idx)
      dx.coeff_at(idx) = s.series_data().coeff_at(idx).derivative(i);
    pprod.push_back(dx);
    Series<Poly> a(2 * n, order, pzero), b(2 * n, order, pzero);
    std::vector<int> e(2 * n, 0);
    e[i] = 1;
    a.set_coeff(e, Poly(n, 1.0));
    e[i] = 0;
    e[n + i] = 1;
    b.set_coeff(e, Poly(n, 1.0));
    p1v.push_back(a);
    p2v.push_back(b);
    Series<Poly> xc(2 * n, order, pzero);
    xc.coeff_at(0) = Poly::variable(i, n);
    xbase.push_back(xc);
  }
  PolyCochain2 out = zero_cochain2(n, order);
  out.re = groupoid::substitute_series(h1.re, p1v, x1) +
           groupoid::substitute_series(h1.re, p2v, x2) -
           groupoid::substitute_series(h1.re, pprod, xbase);
  out.im = groupoid::substitute_series(h1.im, p1v, x1) +
           groupoid::substitute_series(h1.im, p2v, x2) -
           groupoid::substitute_series(h1.im, pprod, xbase);
  return out;
}

TripleCochain delta2_symbolic(const PolyCochain2& h, const GeneratingFunction& s,
                              int truncation) {
  const int n = s.dim();
  const auto chart =
      groupoid::build_symbolic_triple_chart(s.series_data(), n, truncation);
  const Poly pzero(n);
  const int nv = 3 * n;
  std::vector<Series<Poly>> p1v, p2v, p3v, xbase;
  for (int i = 0; i < n; ++i) {
    Series<Poly> a(nv, truncation, pzero), b(nv, truncation, pzero),
        c(nv, truncation, pzero), xc(nv, truncation, pzero);
    std::vector<int> e(nv, 0);
    e[i] = 1;
    a.set_coeff(e, Poly(n, 1.0));
    e[i] = 0;
    e[n + i] = 1;
    b.set_coeff(e, Poly(n, 1.0));
    e[n + i] = 0;
    e[2 * n + i] = 1;
    c.set_coeff(e, Poly(n, 1.0));
    xc.coeff_at(0) = Poly::variable(i, n);
    p1v.push_back(a);
    p2v.push_back(b);
    p3v.push_back(c);
    xbase.push_back(xc);
  }
  auto concat = [](const std::vector<Series<Poly>>& a,
                   const std::vector<Series<Poly>>& b) {
    std::vector<Series<Poly>> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
  };
  // truncate the cochain to the working order before substitution
  auto restrict2 = [&](const Series<Poly>& part) {
    Series<Poly> r(2 * n, truncation, pzero);
    const IndexTable& t = part.table();
    for (int idx = 0; idx < t.size(); ++idx) {
      if (t.degree[idx] > truncation) continue;
      std::vector<int> e(2 * n, 0);
      for (int v = 0; v < 2 * n; ++v) e[v] = t.exps[idx][v];
      r.set_coeff(e, part.coeff_at(idx));
    }
    return r;
  };
  auto apply = [&](const Series<Poly>& raw) {
    const Series<Poly> part = restrict2(raw);
    return groupoid::substitute_series(part, concat(p2v, p3v), chart.x_tilde) -
           groupoid::substitute_series(part, concat(chart.p_bar, p3v), xbase) +
           groupoid::substitute_series(part, concat(p1v, chart.p_tilde), xbase) -
           groupoid::substitute_series(part, concat(p1v, p2v), chart.x_bar);
  };
  return {apply(h.re), apply(h.im)};
}

GradedCoboundaryResult graded_coboundary_solve(const PolyCochain2& h,
                                               const GeneratingFunction& s,
                                               int max_degree) {
  GradedCoboundaryResult out;
  if (s.order() < max_degree)
    throw invalid_input("graded solver: generating function order too low");
  try {
    require_normalized(h);
  } catch (const invalid_input& e) {
    out.failure_reason = e.what();
    return out;
  }
  const int n = s.dim();

  // cocycle precondition
  const TripleCochain dh = delta2_symbolic(h, s, max_degree);
  for (int idx = 0; idx < dh.re.table().size(); ++idx) {
    if (dh.re.coeff_at(idx).is_zero(1e-8) && dh.im.coeff_at(idx).is_zero(1e-8))
      continue;
    out.failed_degree = dh.re.table().degree[idx];
    out.failure_reason =
        "cocycle condition fails at degree " + std::to_string(out.failed_degree);
    return out;
  }
  // symmetry precondition on the mixed bilinear block
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      std::vector<int> eij(2 * n, 0), eji(2 * n, 0);
      eij[i] = 1;
      eij[n + j] = 1;
      eji[j] = 1;
      eji[n + i] = 1;
      const Poly skew_re = h.re.coeff(eij) - h.re.coeff(eji);
      const Poly skew_im = h.im.coeff(eij) - h.im.coeff(eji);
      if (!skew_re.is_zero(1e-8) || !skew_im.is_zero(1e-8)) {
        out.failure_reason = "symmetry condition fails on the bilinear block";
        return out;
      }
    }

  PolyCochain1 primitive = zero_cochain1(n, max_degree);
  for (int m = 2; m <= max_degree; ++m) {
    const PolyCochain2 dprim = delta1_symbolic(primitive, s);
    PolyCochain2 target = zero_cochain2(n, max_degree);
    {
      // copy the degree-m defect into the target's ring
      const IndexTable& t = h.re.table();
      for (int idx = 0; idx < t.size(); ++idx) {
        if (t.degree[idx] != m) continue;
        std::vector<int> e(2 * n, 0);
        for (int v = 0; v < 2 * n; ++v) e[v] = t.exps[idx][v];
        Poly re = h.re.coeff_at(idx);
        Poly im = h.im.coeff_at(idx);
        if (dprim.re.order() >= m) {
          re -= dprim.re.coeff(e);
          im -= dprim.im.coeff(e);
        }
        target.re.set_coeff(e, std::move(re));
        target.im.set_coeff(e, std::move(im));
      }
    }
    CoboundaryResult step;
    try {
      step = coboundary_solve_pi0(target, m);
    } catch (const invalid_input& e) {
      out.failure_reason = e.what();
      out.failed_degree = m;
      return out;
    }
    if (!step.success) {
      out.failed_degree = m;
      out.failure_reason =
          "zero-structure solve failed at degree " + std::to_string(m);
      out.residual = step.residual;
      return out;
    }
    // accumulate into the primitive (step ring may be shorter)
    const IndexTable& ts = step.primitive.re.table();
    for (int idx = 0; idx < ts.size(); ++idx) {
      std::vector<int> e(n, 0);
      for (int v = 0; v < n; ++v) e[v] = ts.exps[idx][v];
      primitive.re.set_coeff(e, primitive.re.coeff(e) +
                                    step.primitive.re.coeff_at(idx));
      primitive.im.set_coeff(e, primitive.im.coeff(e) +
                                    step.primitive.im.coeff_at(idx));
    }
  }

  // verify delta(primitive) = h through the full multiplication
  const PolyCochain2 check = delta1_symbolic(primitive, s);
  double worst = 0.0;
  {
    const IndexTable& t = h.re.table();
    for (int idx = 0; idx < t.size(); ++idx) {
      if (t.degree[idx] > max_degree) continue;
      std::vector<int> e(2 * n, 0);
      for (int v = 0; v < 2 * n; ++v) e[v] = t.exps[idx][v];
      worst = std::max(worst,
                       (check.re.coeff(e) - h.re.coeff_at(idx)).max_abs_coeff());
      worst = std::max(worst,
                       (check.im.coeff(e) - h.im.coeff_at(idx)).max_abs_coeff());
    }
  }
  out.primitive = std::move(primitive);
  out.residual = worst;
  out.success = worst < 1e-8;
  if (!out.success) out.failure_reason = "verification residual too large";
  return out;
}

}  // namespace cocycles
}  // namespace sgalab
