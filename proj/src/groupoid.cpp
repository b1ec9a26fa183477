#include "sgalab/groupoid.hpp"

#include <cmath>

namespace sgalab {
namespace groupoid {

namespace {

// coefficient-wise derivative in a base variable
Series<Poly> series_dx(const Series<Poly>& f, int var) {
  Series<Poly> r = f;
  for (int i = 0; i < f.table().size(); ++i)
    r.coeff_at(i) = f.coeff_at(i).derivative(var);
  return r;
}

Series<Poly> embedded_variable(int v, double scale, int nvars, int order, int n) {
  Series<Poly> s(nvars, order, Poly(n));
  std::vector<int> e(nvars, 0);
  e[v] = 1;
  s.set_coeff(e, Poly(n, scale));
  return s;
}

Series<Poly> constant_series(const Poly& c, int nvars, int order) {
  Series<Poly> s(nvars, order, Poly(c.nvars()));
  s.coeff_at(0) = c;
  return s;
}

// determinant of a small matrix of series by cofactor expansion
Series<Poly> series_det(const std::vector<std::vector<Series<Poly>>>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 1) return m[0][0];
  Series<Poly> acc = m[0][0] - m[0][0];
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<Series<Poly>>> minor;
    minor.reserve(n - 1);
    for (int r = 1; r < n; ++r) {
      std::vector<Series<Poly>> row;
      for (int c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    const Series<Poly> term = m[0][j] * series_det(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

// sqrt of a series with constant term 1 (binomial series in the tail)
Series<Poly> series_sqrt_normalized(const Series<Poly>& f) {
  const Poly c0 = f.coeff_at(0);
  Poly defect = c0 - Poly(c0.nvars(), 1.0);
  if (!defect.is_zero(1e-11))
    throw invalid_input("series sqrt: constant term is not 1");
  Series<Poly> tail = f;
  tail.coeff_at(0) = Poly(c0.nvars());
  Series<Poly> acc = ring_one_like(f);
  Series<Poly> power = acc;
  double coeff = 1.0;  // binomial(1/2, k)
  for (int k = 1; k <= f.order(); ++k) {
    coeff *= (0.5 - (k - 1)) / k;
    power = power * tail;
    acc = acc + power * coeff;
  }
  return acc;
}

Series<Poly> series_log_normalized(const Series<Poly>& f) {
  const Poly c0 = f.coeff_at(0);
  Poly defect = c0 - Poly(c0.nvars(), 1.0);
  if (!defect.is_zero(1e-11))
    throw invalid_input("series log: constant term is not 1");
  Series<Poly> tail = f;
  tail.coeff_at(0) = Poly(c0.nvars());
  Series<Poly> acc = f - f;
  Series<Poly> power = ring_one_like(f);
  for (int k = 1; k <= f.order(); ++k) {
    power = power * tail;
    acc = acc + power * ((k % 2 == 1 ? 1.0 : -1.0) / k);
  }
  return acc;
}

}  // namespace

Series<Poly> substitute_series(const Series<Poly>& f,
                               const std::vector<Series<Poly>>& p_args,
                               const std::vector<Series<Poly>>& x_args) {
  const Series<Poly> one = ring_one_like(p_args[0]);
  return f.substitute<Series<Poly>>(
      p_args, one, [&](const Poly& c, const Series<Poly>& mono) {
        if (c.degree() <= 0) {
          double constant = c.terms().empty() ? 0.0 : c.terms().begin()->second;
          return mono * constant;
        }
        return mono * c.eval_ring<Series<Poly>>(x_args, one);
      });
}

GroupoidPoint chart_first(const GeneratingFunction& s, const PairChart& c) {
  const auto j = s.jet(c.p1, c.p2, c.x);
  return {j.dp1, c.p1};
}

GroupoidPoint chart_second(const GeneratingFunction& s, const PairChart& c) {
  const auto j = s.jet(c.p1, c.p2, c.x);
  return {j.dp2, c.p2};
}

GroupoidPoint chart_product(const GeneratingFunction& s, const PairChart& c) {
  const auto j = s.jet(c.p1, c.p2, c.x);
  return {c.x, j.dx};
}

PairChart pair_to_chart(const GeneratingFunction& s, const GroupoidPoint& g1,
                        const GroupoidPoint& g2, double tol) {
  if ((s.source(g1.x, g1.p) - s.target(g2.x, g2.p)).norm() > tol)
    throw invalid_input("pair_to_chart: arrows are not composable");
  PairChart chart{g1.p, g2.p, g1.x};
  for (int it = 0; it < 50; ++it) {
    const auto j = s.jet(chart.p1, chart.p2, chart.x);
    const VectorXd residual = j.dp1 - g1.x;
    if (residual.cwiseAbs().maxCoeff() < 1e-12) {
      if ((j.dp2 - g2.x).cwiseAbs().maxCoeff() > 1e-7)
        throw invalid_input("pair_to_chart: chart fit left the second base");
      return chart;
    }
    chart.x -= j.dxdp1.transpose().lu().solve(residual);
  }
  throw domain_error("outside local domain");
}

GroupoidPoint multiply(const GeneratingFunction& s, const GroupoidPoint& g1,
                       const GroupoidPoint& g2, double p_max) {
  if (g1.p.norm() > p_max || g2.p.norm() > p_max)
    throw domain_error("outside local domain");
  const PairChart chart = pair_to_chart(s, g1, g2);
  return chart_product(s, chart);
}

namespace {

// damped Newton on F with analytic Jacobian
void damped_newton(VectorXd& u, const std::function<VectorXd(const VectorXd&)>& f,
                   const std::function<MatrixXd(const VectorXd&)>& jac) {
  VectorXd residual = f(u);
  for (int it = 0; it < 50; ++it) {
    if (residual.cwiseAbs().maxCoeff() < 1e-12) return;
    const VectorXd step = jac(u).lu().solve(residual);
    double t = 1.0;
    for (;;) {
      const VectorXd candidate = u - t * step;
      const VectorXd r2 = f(candidate);
      if (r2.norm() <= (1.0 - 0.25 * t) * residual.norm() || t < 1e-4) {
        u = candidate;
        residual = r2;
        break;
      }
      t *= 0.5;
    }
  }
  if (residual.cwiseAbs().maxCoeff() >= 1e-12)
    throw domain_error("outside local domain");
}

}  // namespace

TripleChart solve_triple_chart(const GeneratingFunction& s, const VectorXd& p1,
                               const VectorXd& p2, const VectorXd& p3,
                               const VectorXd& x) {
  const int n = s.dim();
  TripleChart out;
  out.p1 = p1;
  out.p2 = p2;
  out.p3 = p3;
  out.x = x;

  // barred system: unknowns (x_bar, p_bar)
  VectorXd u(2 * n);
  u.head(n) = x;
  u.tail(n) = p1 + p2;
  auto f_bar = [&](const VectorXd& v) {
    const VectorXd xb = v.head(n), pb = v.tail(n);
    const auto jb = s.jet(pb, p3, x);
    const auto ja = s.jet(p1, p2, xb);
    VectorXd r(2 * n);
    r.head(n) = xb - jb.dp1;
    r.tail(n) = pb - ja.dx;
    return r;
  };
  auto jac_bar = [&](const VectorXd& v) {
    const VectorXd xb = v.head(n), pb = v.tail(n);
    const auto jb = s.jet(pb, p3, x);
    const auto ja = s.jet(p1, p2, xb);
    MatrixXd m = MatrixXd::Identity(2 * n, 2 * n);
    m.topRightCorner(n, n) = -jb.dp1dp1;
    m.bottomLeftCorner(n, n) = -ja.dxdx;
    return m;
  };
  damped_newton(u, f_bar, jac_bar);
  out.x_bar = u.head(n);
  out.p_bar = u.tail(n);

  // tilde system: unknowns (x_tilde, p_tilde)
  VectorXd w(2 * n);
  w.head(n) = x;
  w.tail(n) = p2 + p3;
  auto f_til = [&](const VectorXd& v) {
    const VectorXd xt = v.head(n), pt = v.tail(n);
    const auto jb = s.jet(p1, pt, x);
    const auto ja = s.jet(p2, p3, xt);
    VectorXd r(2 * n);
    r.head(n) = xt - jb.dp2;
    r.tail(n) = pt - ja.dx;
    return r;
  };
  auto jac_til = [&](const VectorXd& v) {
    const VectorXd xt = v.head(n), pt = v.tail(n);
    const auto jb = s.jet(p1, pt, x);
    const auto ja = s.jet(p2, p3, xt);
    MatrixXd m = MatrixXd::Identity(2 * n, 2 * n);
    m.topRightCorner(n, n) = -jb.dp2dp2;
    m.bottomLeftCorner(n, n) = -ja.dxdx;
    return m;
  };
  damped_newton(w, f_til, jac_til);
  out.x_tilde = w.head(n);
  out.p_tilde = w.tail(n);
  return out;
}

double sga_residual(const GeneratingFunction& s, const VectorXd& p1,
                    const VectorXd& p2, const VectorXd& p3, const VectorXd& x) {
  const TripleChart c = solve_triple_chart(s, p1, p2, p3, x);
  const double lhs = s.value(p1, p2, c.x_bar) + s.value(c.p_bar, p3, x) -
                     c.x_bar.dot(c.p_bar);
  const double rhs = s.value(p2, p3, c.x_tilde) + s.value(p1, c.p_tilde, x) -
                     c.p_tilde.dot(c.x_tilde);
  return std::abs(lhs - rhs);
}

double a0_residual(const GeneratingFunction& s, const Cochain2Eval& a0,
                   const VectorXd& p1, const VectorXd& p2, const VectorXd& p3,
                   const VectorXd& x) {
  const int n = s.dim();
  const TripleChart c = solve_triple_chart(s, p1, p2, p3, x);
  const auto j_left_outer = s.jet(p1, p2, c.x_bar);
  const auto j_left_inner = s.jet(c.p_bar, p3, x);
  const auto j_right_outer = s.jet(p2, p3, c.x_tilde);
  const auto j_right_inner = s.jet(p1, c.p_tilde, x);

  const double det_l =
      (MatrixXd::Identity(n, n) - j_left_outer.dxdx * j_left_inner.dp1dp1)
          .determinant();
  const double det_r =
      (MatrixXd::Identity(n, n) - j_right_outer.dxdx * j_right_inner.dp2dp2)
          .determinant();
  if (det_l <= 0.0 || det_r <= 0.0)
    throw domain_error("leading-symbol equation: determinant factor not positive");

  const complexd lhs = a0(p1, p2, c.x_bar) * a0(c.p_bar, p3, x) /
                       std::sqrt(std::abs(det_l));
  const complexd rhs = a0(p2, p3, c.x_tilde) * a0(p1, c.p_tilde, x) /
                       std::sqrt(std::abs(det_r));
  return std::abs(lhs - rhs);
}

double gamma_s(const GeneratingFunction& s, const spray::SprayRealization& spray,
               const PairChart& chart) {
  const int n = s.dim();
  const auto j = s.jet(chart.p1, chart.p2, chart.x);
  const VectorXd x1 = j.dp1;
  const MatrixXd dx1 = j.dxdp1.transpose();  // row a: d x1_a / d x

  const XJetVector sj = spray.source_jet(x1, chart.p1);
  VectorXd x_tilde(n);
  MatrixXd ds(n, n);
  for (int i = 0; i < n; ++i) {
    x_tilde(i) = sj[i].value;
    ds.row(i) = sj[i].grad.transpose();
  }
  const MatrixXd d_x_tilde = ds * dx1;

  const double det1 = d_x_tilde.determinant();
  const double det2 = spray.d_base_q(x_tilde, chart.p1).determinant();
  const double det3 = spray.d_base_q(x_tilde, -chart.p2).determinant();
  return std::sqrt(std::abs(det1 * det2 * det3));
}

BisectionConvolution convolve_bisections(
    const GeneratingFunction& s, const Cochain2Eval& a0, const VectorXd& p1,
    const VectorXd& p2, const std::function<complexd(const VectorXd&)>& f1,
    const std::function<complexd(const VectorXd&)>& f2, const VectorXd& x) {
  const auto j = s.jet(p1, p2, x);
  BisectionConvolution out;
  out.s_value = j.value;
  out.p_out = j.dx;
  out.density_factor = f1(j.dp1) * f2(j.dp2) * a0(p1, p2, x);
  return out;
}

std::vector<GradedBlock> taylor_family(const GeneratingFunction& s, int max_order) {
  std::vector<GradedBlock> out;
  for (int k = 1; k <= std::min(max_order, s.order()); ++k)
    out.push_back({k, s.graded_block(k)});
  return out;
}

SymbolicTripleChart build_symbolic_triple_chart(const Series<Poly>& s_data,
                                                int n, int truncation) {
  const int nv = 3 * n;
  const Poly pzero(n);
  using SP = Series<Poly>;
  std::vector<SP> p1v, p2v, p3v, xbase;
  for (int i = 0; i < n; ++i) {
    p1v.push_back(embedded_variable(i, 1.0, nv, truncation, n));
    p2v.push_back(embedded_variable(n + i, 1.0, nv, truncation, n));
    p3v.push_back(embedded_variable(2 * n + i, 1.0, nv, truncation, n));
    xbase.push_back(constant_series(Poly::variable(i, n), nv, truncation));
  }

  // restrict the generating series to the working truncation
  Series<Poly> s_trunc = s_data.truncated(truncation);

  std::vector<SP> dp1(n, SP(nv, truncation, pzero));
  std::vector<SP> dp2(n, SP(nv, truncation, pzero));
  std::vector<SP> dx(n, SP(nv, truncation, pzero));
  std::vector<Series<Poly>> sdp1, sdp2, sdx;
  for (int i = 0; i < n; ++i) {
    sdp1.push_back(s_trunc.partial(i));
    sdp2.push_back(s_trunc.partial(n + i));
    sdx.push_back(series_dx(s_trunc, i));
  }

  SymbolicTripleChart out;
  out.x_bar = xbase;
  out.x_tilde = xbase;
  std::vector<SP> p_bar(n, SP(nv, truncation, pzero)),
      p_til(n, SP(nv, truncation, pzero));
  for (int i = 0; i < n; ++i) {
    p_bar[i] = p1v[i] + p2v[i];
    p_til[i] = p2v[i] + p3v[i];
  }
  out.p_bar = p_bar;
  out.p_tilde = p_til;

  auto concat = [&](const std::vector<SP>& a, const std::vector<SP>& b) {
    std::vector<SP> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
  };

  for (int sweep = 0; sweep < truncation + 2; ++sweep) {
    std::vector<SP> xb(n, SP(nv, truncation, pzero));
    std::vector<SP> pb(n, SP(nv, truncation, pzero));
    std::vector<SP> xt(n, SP(nv, truncation, pzero));
    std::vector<SP> pt(n, SP(nv, truncation, pzero));
    const auto args_bar_inner = concat(out.p_bar, p3v);
    const auto args_left = concat(p1v, p2v);
    const auto args_til_inner = concat(p1v, out.p_tilde);
    const auto args_right = concat(p2v, p3v);
    for (int i = 0; i < n; ++i) {
      xb[i] = substitute_series(sdp1[i], args_bar_inner, xbase);
      pb[i] = substitute_series(sdx[i], args_left, out.x_bar);
      xt[i] = substitute_series(sdp2[i], args_til_inner, xbase);
      pt[i] = substitute_series(sdx[i], args_right, out.x_tilde);
    }
    out.x_bar = xb;
    out.p_bar = pb;
    out.x_tilde = xt;
    out.p_tilde = pt;
  }

  Series<Poly> lhs = substitute_series(s_trunc, concat(p1v, p2v), out.x_bar) +
                     substitute_series(s_trunc, concat(out.p_bar, p3v), xbase);
  Series<Poly> rhs = substitute_series(s_trunc, concat(p2v, p3v), out.x_tilde) +
                     substitute_series(s_trunc, concat(p1v, out.p_tilde), xbase);
  Series<Poly> pairing_l(nv, truncation, pzero), pairing_r(nv, truncation, pzero);
  for (int i = 0; i < n; ++i) {
    pairing_l = pairing_l + out.x_bar[i] * out.p_bar[i];
    pairing_r = pairing_r + out.x_tilde[i] * out.p_tilde[i];
  }
  out.sga_residual = lhs - pairing_l - rhs + pairing_r;
  return out;
}

SymbolicPairChart build_symbolic_pair_chart(const GeneratingFunction& s,
                                            const spray::SprayRealization& spray) {
  const int n = s.dim();
  const int order = s.order();
  const int nv = 2 * n;
  const Poly pzero(n);
  using SP = Series<Poly>;

  SymbolicPairChart out;
  for (int i = 0; i < n; ++i) {
    out.x1.push_back(s.series_data().partial(i));
    out.x2.push_back(s.series_data().partial(n + i));
    out.p_prod.push_back(series_dx(s.series_data(), i));
  }

  std::vector<SP> p1v, p2neg;
  for (int i = 0; i < n; ++i) {
    p1v.push_back(embedded_variable(i, 1.0, nv, order, n));
    p2neg.push_back(embedded_variable(n + i, -1.0, nv, order, n));
  }
  for (int i = 0; i < n; ++i)
    out.x_tilde.push_back(substitute_series(spray.s_series()[i], p1v, out.x1));

  // gamma^2 = det(d_x x_tilde) det(d_base Q at (x_tilde, p1))
  //           det(d_base Q at (x_tilde, -p2))
  std::vector<std::vector<SP>> m1(n, std::vector<SP>(n, SP(nv, order, pzero)));
  std::vector<std::vector<SP>> m2 = m1, m3 = m1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m1[i][j] = series_dx(out.x_tilde[i], j);
      const Series<Poly> dq = series_dx(spray.q_series()[i], j);
      m2[i][j] = substitute_series(dq, p1v, out.x_tilde);
      m3[i][j] = substitute_series(dq, p2neg, out.x_tilde);
    }
  const SP det_product = series_det(m1) * series_det(m2) * series_det(m3);
  out.gamma = series_sqrt_normalized(det_product);
  out.log_gamma = series_log_normalized(det_product) * 0.5;
  return out;
}

}  // namespace groupoid
}  // namespace sgalab
