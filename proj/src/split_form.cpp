#include "sgalab/liecase.hpp"

#include <cmath>

namespace sgalab {
namespace liecase {

namespace {

// tangent data in (da, dx) coordinates of the action groupoid
struct ArrowFrame {
  VectorXd a, x;          // the arrow
  MatrixXd theta_l_inv;   // left Maurer-Cartan inverse at a
  MatrixXd theta_r_inv;   // right Maurer-Cartan inverse at a
  MatrixXd coad_neg;      // Ad* of exp(-a)
  double f_tilde;         // det(theta_L(a))
};

ArrowFrame make_frame(const LieAlgebraData& lie, const ActionGroupoidElement& g) {
  ArrowFrame fr;
  fr.a = g.a;
  fr.x = g.x;
  const MatrixXd tl = theta_left(lie, g.a);
  const MatrixXd tr = theta_right(lie, g.a);
  fr.theta_l_inv = tl.lu().inverse();
  fr.theta_r_inv = tr.lu().inverse();
  fr.coad_neg = coadjoint(lie, VectorXd(-g.a));
  fr.f_tilde = tl.determinant();
  return fr;
}

// infinitesimal coadjoint action: d/dt Ad*_{exp(t eta)} y
VectorXd coad_gen(const LieAlgebraData& lie, const VectorXd& eta, const VectorXd& y) {
  return -lie.ad(eta).transpose() * y;
}

// phi^h at a composable pair: basis vectors given in (xi, v, eta) blocks,
// output stacked tangent vectors (da1, dx1, da2, dx2)
MatrixXd apply_phi_h(const LieAlgebraData& lie, const ArrowFrame& g1,
                     const ArrowFrame& g2, const MatrixXd& columns) {
  const int n = lie.dim;
  const int cols = static_cast<int>(columns.cols());
  MatrixXd out(4 * n, cols);
  for (int c = 0; c < cols; ++c) {
    const VectorXd xi = columns.block(0, c, n, 1);
    const VectorXd v = columns.block(n, c, n, 1);
    const VectorXd eta = columns.block(2 * n, c, n, 1);
    out.block(0, c, n, 1) = g1.theta_r_inv * xi;      // da1
    out.block(n, c, n, 1) = v;                        // dx1 (h^L)
    out.block(2 * n, c, n, 1) = g2.theta_l_inv * eta; // da2
    out.block(3 * n, c, n, 1) =
        -coad_gen(lie, eta, g2.x) + g2.coad_neg * v;  // dx2
  }
  return out;
}

// sigma^h = f(g1,g2) sigma^c evaluated on phi^h(columns); sigma^c reads the
// trivialization chart (a1, a2, x2)
complexd eval_sigma_h(const LieAlgebraData& lie, const ArrowFrame& g1,
                      const ArrowFrame& g2, const ActionCochain2& f,
                      const MatrixXd& columns) {
  const int n = lie.dim;
  const MatrixXd tangent = apply_phi_h(lie, g1, g2, columns);
  MatrixXd chart(3 * n, 3 * n);
  chart.topRows(n) = tangent.topRows(n);                 // da1
  chart.middleRows(n, n) = tangent.middleRows(2 * n, n); // da2
  chart.bottomRows(n) = tangent.bottomRows(n);           // dx2
  const double frame =
      std::sqrt(std::abs(g1.f_tilde * g2.f_tilde * chart.determinant()));
  return f(g1.a, g2.a, g2.x) * frame;
}

// Liouville value on 2n tangent vectors at (a, x)
double liouville_at(const LieAlgebraData& lie, const VectorXd& a, const VectorXd& x,
                    const MatrixXd& vectors) {
  const MatrixXd omega = action_omega(lie, a, x);
  const MatrixXd gram = vectors.transpose() * omega * vectors;
  return std::pow(std::abs(gram.determinant()), 0.25);
}

MatrixXd random_invertible(Rng& rng, int n) {
  for (;;) {
    MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = rng.gaussian();
    if (std::abs(m.determinant()) > 0.2) return m;
  }
}

}  // namespace

double split_associativity_residual(const LieAlgebraData& lie,
                                    const ActionGroupoidElement& g1,
                                    const ActionGroupoidElement& g2,
                                    const ActionGroupoidElement& g3,
                                    const ActionCochain2& f, Rng& rng,
                                    int order) {
  const int n = lie.dim;
  const ActionGroupoidElement g12 = action_multiply(lie, g1, g2, order);
  const ActionGroupoidElement g23 = action_multiply(lie, g2, g3, order);

  const ArrowFrame f1 = make_frame(lie, g1);
  const ArrowFrame f2 = make_frame(lie, g2);
  const ArrowFrame f3 = make_frame(lie, g3);
  const ArrowFrame f12 = make_frame(lie, g12);
  const ArrowFrame f23 = make_frame(lie, g23);

  // arbitrary bases of the five constituent spaces
  const MatrixXd bs1 = random_invertible(rng, n);  // A^s at t(g1)
  const MatrixXd bm1 = random_invertible(rng, n);  // TM at s(g1)
  const MatrixXd bm2 = random_invertible(rng, n);  // TM at s(g2)
  const MatrixXd bt2 = random_invertible(rng, n);  // A^t at s(g2)
  const MatrixXd bt3 = random_invertible(rng, n);  // A^t at s(g3)

  auto stack3 = [&](const MatrixXd& s, const MatrixXd& m, const MatrixXd& t) {
    MatrixXd c = MatrixXd::Zero(3 * n, 3 * n);
    c.block(0, 0, n, n) = s;
    c.block(n, n, n, n) = m;
    c.block(2 * n, 2 * n, n, n) = t;
    return c;
  };

  // Sigma^L at g12 applied to (bs1, bm2): columns (theta_R^{-1} xi, v)
  MatrixXd left_den_vectors(2 * n, 2 * n);
  left_den_vectors.setZero();
  left_den_vectors.block(0, 0, n, n) = f12.theta_r_inv * bs1;
  left_den_vectors.block(n, n, n, n) = bm2;
  const double lam_left = liouville_at(lie, g12.a, g12.x, left_den_vectors);

  const complexd lhs = eval_sigma_h(lie, f12, f3, f, stack3(bs1, bm2, bt3)) *
                       eval_sigma_h(lie, f1, f2, f, stack3(bs1, bm1, bt2)) /
                       lam_left;

  // (Sigma^L_{g2})^{-1} Sigma^R_{g2} applied to (bm1, bt2)
  MatrixXd mixed(3 * n, 2 * n);
  mixed.setZero();
  for (int c = 0; c < 2 * n; ++c) {
    const VectorXd v = c < n ? VectorXd(bm1.col(c)) : VectorXd(VectorXd::Zero(n));
    const VectorXd eta = c < n ? VectorXd(VectorXd::Zero(n)) : VectorXd(bt2.col(c - n));
    // Sigma^R_{g2}(v, eta) = (theta_L^{-1} eta, -coad(eta) x2 + E(-a2) v)
    const VectorXd da = f2.theta_l_inv * eta;
    const VectorXd dx = -coad_gen(lie, eta, f2.x) + f2.coad_neg * v;
    // solve Sigma^L_{g2}(xi', v') = (da, dx): xi' = theta_R da, v' = dx
    mixed.block(0, c, n, 1) = theta_right(lie, g2.a) * da;
    mixed.block(n, c, n, 1) = dx;
  }
  MatrixXd rhs_first(3 * n, 3 * n);
  rhs_first.setZero();
  rhs_first.leftCols(2 * n) = mixed;
  rhs_first.block(2 * n, 2 * n, n, n) = bt3;

  // Sigma^R at g23 applied to (bm1, bt3)
  MatrixXd right_den_vectors(2 * n, 2 * n);
  right_den_vectors.setZero();
  for (int c = 0; c < n; ++c) {
    right_den_vectors.block(0, c, n, 1) = VectorXd::Zero(n);
    right_den_vectors.block(n, c, n, 1) = f23.coad_neg * bm1.col(c);
  }
  for (int c = 0; c < n; ++c) {
    const VectorXd eta = bt3.col(c);
    right_den_vectors.block(0, n + c, n, 1) = f23.theta_l_inv * eta;
    right_den_vectors.block(n, n + c, n, 1) = -coad_gen(lie, eta, f23.x);
  }
  const double lam_right = liouville_at(lie, g23.a, g23.x, right_den_vectors);

  const complexd rhs = eval_sigma_h(lie, f2, f3, f, rhs_first) *
                       eval_sigma_h(lie, f1, f23, f, stack3(bs1, bm1, bt3)) /
                       lam_right;

  return std::abs(lhs - rhs) / std::abs(lhs);
}

}  // namespace liecase
}  // namespace sgalab
