#include "sgalab/liecase.hpp"

#include <cmath>

namespace sgalab {
namespace liecase {

namespace {

// K_{2p} = B_{2p} / (2p)! for the graded BCH recursion
constexpr double kEvenBernoulliOverFactorial[] = {
    1.0 / 12.0,         // B_2 / 2!
    -1.0 / 720.0,       // B_4 / 4!
    1.0 / 30240.0,      // B_6 / 6!
    -1.0 / 1209600.0,   // B_8 / 8!
    1.0 / 47900160.0,   // B_10 / 10!
};

template <class E, class Bracket, class Add, class Scale>
std::vector<E> bch_graded(const E& x, const E& y, int order, Bracket bracket,
                          Add add, Scale scale) {
  // z_1 = x + y; the recursion
  // (m+1) z_{m+1} = 1/2 [x - y, z_m]
  //   + sum_{p >= 1, 2p <= m} K_{2p} sum_{k_1+..+k_{2p} = m}
  //       [z_{k_1}, [ ... [z_{k_{2p}}, x + y] ... ]]
  std::vector<E> z;
  z.push_back(add(x, scale(y, 1.0)));  // z[0] = z_1
  const E x_minus_y = add(x, scale(y, -1.0));
  const E x_plus_y = z[0];
  for (int m = 1; m < order; ++m) {
    E acc = scale(bracket(x_minus_y, z[m - 1]), 0.5);
    for (int p = 1; 2 * p <= m; ++p) {
      const double coeff = kEvenBernoulliOverFactorial[p - 1];
      // compositions of m into 2p positive parts
      std::vector<int> parts(2 * p, 1);
      std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == 2 * p - 1) {
          parts[slot] = remaining;
          E inner = bracket(z[parts[2 * p - 1] - 1], x_plus_y);
          for (int s = 2 * p - 2; s >= 0; --s)
            inner = bracket(z[parts[s] - 1], inner);
          acc = add(acc, scale(inner, coeff));
          return;
        }
        for (int v = 1; v <= remaining - (2 * p - 1 - slot); ++v) {
          parts[slot] = v;
          rec(slot + 1, remaining - v);
        }
      };
      rec(0, m);
    }
    z.push_back(scale(acc, 1.0 / static_cast<double>(m + 1)));
  }
  return z;
}

Poly truncate_poly(const Poly& p, int max_degree) {
  Poly r(p.nvars());
  for (const auto& [key, coeff] : p.terms())
    if (Poly::key_degree(key) <= max_degree)
      r += Poly::monomial_from_key(key, coeff, p.nvars());
  return r;
}

}  // namespace

VectorXd bch(const LieAlgebraData& lie, const VectorXd& p1, const VectorXd& p2,
             int order) {
  if (order < 1 || order > 10)
    throw invalid_input("bch: order must be between 1 and 10");
  auto bracket = [&](const VectorXd& a, const VectorXd& b) {
    return lie.bracket(a, b);
  };
  auto add = [](const VectorXd& a, const VectorXd& b) { return VectorXd(a + b); };
  auto scale = [](const VectorXd& a, double s) { return VectorXd(s * a); };
  auto graded = bch_graded<VectorXd>(p1, p2, order, bracket, add, scale);
  VectorXd z = VectorXd::Zero(lie.dim);
  for (const auto& zk : graded) z += zk;
  return z;
}

std::vector<Poly> bch_series(const LieAlgebraData& lie, int order) {
  if (order < 1 || order > 10)
    throw invalid_input("bch_series: order must be between 1 and 10");
  const int n = lie.dim;
  const int nv = 2 * n;
  using GPoly = std::vector<Poly>;
  GPoly x(n, Poly(nv)), y(n, Poly(nv));
  for (int i = 0; i < n; ++i) {
    x[i] = Poly::variable(i, nv);
    y[i] = Poly::variable(n + i, nv);
  }
  auto bracket = [&](const GPoly& a, const GPoly& b) {
    GPoly r(n, Poly(nv));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        bool any = false;
        for (int k = 0; k < n; ++k)
          if (lie.structure_constant(i, j, k) != 0.0) any = true;
        if (!any) continue;
        const Poly prod = truncate_poly(a[i] * b[j], order);
        for (int k = 0; k < n; ++k) {
          const double c = lie.structure_constant(i, j, k);
          if (c != 0.0) r[k] += prod * c;
        }
      }
    return r;
  };
  auto add = [&](const GPoly& a, const GPoly& b) {
    GPoly r = a;
    for (int i = 0; i < n; ++i) r[i] += b[i];
    return r;
  };
  auto scale = [&](const GPoly& a, double s) {
    GPoly r = a;
    for (int i = 0; i < n; ++i) r[i] = r[i] * s;
    return r;
  };
  auto graded = bch_graded<GPoly>(x, y, order, bracket, add, scale);
  GPoly z(n, Poly(nv));
  for (const auto& zk : graded)
    for (int i = 0; i < n; ++i) z[i] += zk[i];
  return z;
}

VectorXd bch_matrix_log_oracle(const LieAlgebraData& lie, const VectorXd& p1,
                               const VectorXd& p2) {
  if (lie.rep.empty())
    throw invalid_input("bch oracle: no representation available");
  const int d = static_cast<int>(lie.rep[0].rows());
  MatrixXd mx = MatrixXd::Zero(d, d), my = MatrixXd::Zero(d, d);
  for (int i = 0; i < lie.dim; ++i) {
    mx += p1(i) * lie.rep[i];
    my += p2(i) * lie.rep[i];
  }
  const MatrixXd logm = logm_near_identity(expm(mx) * expm(my));
  // coordinates by least squares over the flattened representation basis
  MatrixXd basis(d * d, lie.dim);
  for (int i = 0; i < lie.dim; ++i)
    basis.col(i) = Eigen::Map<const VectorXd>(lie.rep[i].data(), d * d);
  const VectorXd target = Eigen::Map<const VectorXd>(logm.data(), d * d);
  return solve_least_squares(basis, target).solution;
}

DufloFactors duflo_factors(const LieAlgebraData& lie, const VectorXd& p) {
  const MatrixXd ad = lie.ad(p);
  if (operator_norm(ad) >= 1.0)
    throw domain_error("duflo factors: |ad_p| >= 1, outside the series guard");
  DufloFactors out;
  out.f_g = 1.0;
  out.f_r = sinhc_half(ad).determinant();
  if (!(out.f_r > 0.0))
    throw domain_error("duflo factors: nonpositive F_R");
  out.f_k = std::sqrt(out.f_r);
  out.f_tilde = exp_ratio_neg(ad).determinant();
  return out;
}

FactorChoice factor_choice_from_string(const std::string& name) {
  if (name == "gutt" || name == "fg") return FactorChoice::gutt;
  if (name == "rieffel" || name == "fr") return FactorChoice::rieffel;
  if (name == "kontsevich" || name == "fk") return FactorChoice::kontsevich;
  throw invalid_input("unknown factor choice: " + name);
}

double factor_value(const LieAlgebraData& lie, FactorChoice f, const VectorXd& p) {
  switch (f) {
    case FactorChoice::gutt:
      return 1.0;
    case FactorChoice::rieffel:
      return duflo_factors(lie, p).f_r;
    case FactorChoice::kontsevich:
      return duflo_factors(lie, p).f_k;
  }
  throw invalid_input("bad factor choice");
}

PlaneWaveProduct plane_wave_star(const LieAlgebraData& lie, FactorChoice f,
                                 const VectorXd& p1, const VectorXd& p2,
                                 int order) {
  PlaneWaveProduct out;
  out.p_out = bch(lie, p1, p2, order);
  out.amplitude = factor_value(lie, f, p1) * factor_value(lie, f, p2) /
                  factor_value(lie, f, out.p_out);
  return out;
}

MatrixXd coadjoint(const LieAlgebraData& lie, const VectorXd& a) {
  return expm(-lie.ad(a)).transpose();
}

MatrixXd coadjoint_derivative(const LieAlgebraData& lie, const VectorXd& a,
                              const VectorXd& da) {
  return expm_derivative(-lie.ad(a), -lie.ad(da)).transpose();
}

MatrixXd theta_left(const LieAlgebraData& lie, const VectorXd& a) {
  return exp_ratio_neg(lie.ad(a));
}

MatrixXd theta_right(const LieAlgebraData& lie, const VectorXd& a) {
  return exp_ratio_pos(lie.ad(a));
}

VectorXd action_source(const LieAlgebraData&, const ActionGroupoidElement& g) {
  return g.x;
}

VectorXd action_target(const LieAlgebraData& lie, const ActionGroupoidElement& g) {
  return coadjoint(lie, g.a) * g.x;
}

ActionGroupoidElement action_inverse(const LieAlgebraData& lie,
                                     const ActionGroupoidElement& g) {
  return {-g.a, action_target(lie, g)};
}

ActionGroupoidElement action_multiply(const LieAlgebraData& lie,
                                      const ActionGroupoidElement& g1,
                                      const ActionGroupoidElement& g2,
                                      int order, double tol) {
  const VectorXd joint = action_target(lie, g2);
  if ((g1.x - joint).norm() > tol)
    throw invalid_input("action groupoid: arrows are not composable");
  return {bch(lie, g1.a, g2.a, order), g2.x};
}

MatrixXd action_omega(const LieAlgebraData& lie, const VectorXd& a,
                      const VectorXd& x) {
  const int n = lie.dim;
  const MatrixXd theta = theta_left(lie, a);
  MatrixXd omega = MatrixXd::Zero(2 * n, 2 * n);
  // omega((da1,dx1),(da2,dx2)) = <dx1, theta da2> - <dx2, theta da1>
  //                              - <x, [theta da1, theta da2]>
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const VectorXd ti = theta.col(i);
      const VectorXd tj = theta.col(j);
      omega(i, j) = -x.dot(lie.bracket(ti, tj));
    }
  omega.block(n, 0, n, n) = theta;             // omega(dx_i, da_j) = theta_{ij}
  omega.block(0, n, n, n) = -theta.transpose();
  return omega;
}

}  // namespace liecase
}  // namespace sgalab
