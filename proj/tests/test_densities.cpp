#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgalab/densities.hpp"

using namespace sgalab;
using namespace sgalab::densities;

namespace {

MatrixXd standard_omega(int n) {
  MatrixXd j = MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
  return j;
}

MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

MatrixXd random_invertible(Rng& rng, int n) {
  for (;;) {
    MatrixXd m = random_matrix(rng, n, n);
    if (std::abs(m.determinant()) > 0.1) return m;
  }
}

// exp(J S) with S symmetric is symplectic for the standard form
MatrixXd random_symplectic(Rng& rng, int n) {
  const MatrixXd j = standard_omega(n);
  const MatrixXd raw = random_matrix(rng, 2 * n, 2 * n);
  const MatrixXd s = 0.5 * (raw + raw.transpose());
  return expm(j * s * 0.4);
}

// relation value transported to a reference basis of the same subspace
complexd value_on(const AlphaDensity& d, const MatrixXd& own_basis,
                  const MatrixXd& target_basis) {
  // target = own * X
  const MatrixXd x = own_basis.colPivHouseholderQr().solve(target_basis);
  return d.eval(x);
}

}  // namespace

TEST_CASE("density evaluation and scaling law") {
  auto d = AlphaDensity::on_identity_basis(0.5, 2, 1.0);
  CHECK(std::abs(d.eval(MatrixXd::Identity(2, 2)) - 1.0) < 1e-15);
  MatrixXd diag = MatrixXd::Identity(2, 2);
  diag(0, 0) = 2.0;
  CHECK(std::abs(d.eval(diag) - std::sqrt(2.0)) < 1e-15);

  // alpha = 1, value 3, any basis with |det| = 2 gives 6
  auto d3 = AlphaDensity::on_identity_basis(1.0, 3, 3.0);
  Rng rng(3);
  MatrixXd a = random_invertible(rng, 3);
  a *= std::cbrt(2.0 / std::abs(a.determinant()));
  if (a.determinant() > 0) a.col(0) *= -1.0;  // det = -2
  CHECK(std::abs(a.determinant() + 2.0) < 1e-12);
  CHECK(std::abs(d3.eval(a) - 6.0) < 1e-12);

  // scaling law on random bases
  for (int trial = 0; trial < 200; ++trial) {
    const double order = trial % 2 == 0 ? 0.5 : 1.0;
    AlphaDensity dn(order, 3, complexd(rng.uniform(0.5, 2.0), rng.uniform(-1, 1)),
                    random_invertible(rng, 3));
    const MatrixXd beta = random_invertible(rng, 3);
    const MatrixXd change = random_invertible(rng, 3);
    const complexd lhs = dn.eval(beta * change);
    const complexd rhs =
        dn.eval(beta) * std::pow(std::abs(change.determinant()), order);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));
  }

  MatrixXd singular = MatrixXd::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_WITH_AS(d.eval(singular), "degenerate basis", invalid_input);
}

TEST_CASE("liouville half-density") {
  const MatrixXd omega2 = standard_omega(1);
  const AlphaDensity lam = liouville_half_density(omega2);
  CHECK(std::abs(lam.eval(MatrixXd::Identity(2, 2)) - 1.0) < 1e-15);
  MatrixXd stretched = MatrixXd::Identity(2, 2);
  stretched(0, 0) = 2.0;
  CHECK(std::abs(lam.eval(stretched) - std::sqrt(2.0)) < 1e-15);

  // random symplectic omega on R^4, random basis: |det gram|^{1/4} oracle
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd a = random_invertible(rng, 4);
    const MatrixXd omega = a.transpose() * standard_omega(2) * a;
    const AlphaDensity lam4 = liouville_half_density(omega);
    const MatrixXd basis = random_invertible(rng, 4);
    const MatrixXd gram = basis.transpose() * omega * basis;
    const double oracle = std::pow(std::abs(gram.determinant()), 0.25);
    CHECK(std::abs(lam4.eval(basis) - oracle) < 1e-12 * oracle);
  }

  // value 1 on any standard symplectic basis
  for (int trial = 0; trial < 50; ++trial) {
    const MatrixXd t = random_symplectic(rng, 2);
    const AlphaDensity lam4 = liouville_half_density(standard_omega(2));
    CHECK(std::abs(lam4.eval(t) - 1.0) < 1e-11);
  }

  CHECK_THROWS_AS(liouville_half_density(MatrixXd::Zero(2, 2)), invalid_input);
}

TEST_CASE("quotient density") {
  Rng rng(11);
  const int n1 = 2, n2 = 2, n = 4;

  SUBCASE("product case returns the second factor") {
    ShortExactPresentation pres;
    pres.ambient_dim = n;
    pres.basis_v1 = MatrixXd::Zero(n, n1);
    pres.basis_v1.topRows(n1) = MatrixXd::Identity(n1, n1);
    pres.complement = MatrixXd::Zero(n, n2);
    pres.complement.bottomRows(n2) = MatrixXd::Identity(n2, n2);
    pres.projection = MatrixXd::Zero(n2, n);
    pres.projection.rightCols(n2) = MatrixXd::Identity(n2, n2);

    const complexd v1(1.3, 0.0), v2(0.4, 0.7);
    AlphaDensity sigma = AlphaDensity::on_identity_basis(0.5, n, v1 * v2);
    AlphaDensity sigma1 = AlphaDensity::on_identity_basis(0.5, n1, v1);
    const AlphaDensity sigma2 = quotient_density(sigma, sigma1, pres);
    CHECK(std::abs(sigma2.eval(MatrixXd::Identity(n2, n2)) - v2) < 1e-13);
  }

  SUBCASE("complement independence") {
    for (int trial = 0; trial < 20; ++trial) {
      ShortExactPresentation pres;
      pres.ambient_dim = n;
      pres.basis_v1 = random_matrix(rng, n, n1);
      pres.complement = random_matrix(rng, n, n2);
      MatrixXd joint(n, n);
      joint << pres.basis_v1, pres.complement;
      if (std::abs(joint.determinant()) < 0.1) continue;
      // projection with kernel exactly V1
      pres.projection = nullspace(pres.basis_v1.transpose()).transpose();

      AlphaDensity sigma(0.5, n, complexd(0.9, 0.2), random_invertible(rng, n));
      AlphaDensity sigma1(0.5, n1, complexd(1.7, -0.3), random_invertible(rng, n1));
      const AlphaDensity out1 = quotient_density(sigma, sigma1, pres);

      ShortExactPresentation shifted = pres;
      shifted.complement += pres.basis_v1 * random_matrix(rng, n1, n2);
      const AlphaDensity out2 = quotient_density(sigma, sigma1, shifted);
      // same projected reference basis, so values are directly comparable
      const MatrixXd probe = random_invertible(rng, n2);
      const complexd a = value_on(out1, out1.ref_basis, probe);
      const complexd b = value_on(out2, out2.ref_basis, probe);
      CHECK(std::abs(a - b) < 1e-12 * std::abs(a));
    }
  }

  SUBCASE("vanishing denominator") {
    ShortExactPresentation pres;
    pres.ambient_dim = n;
    pres.basis_v1 = MatrixXd::Zero(n, n1);
    pres.basis_v1.topRows(n1) = MatrixXd::Identity(n1, n1);
    pres.complement = MatrixXd::Zero(n, n2);
    pres.complement.bottomRows(n2) = MatrixXd::Identity(n2, n2);
    pres.projection = MatrixXd::Zero(n2, n);
    pres.projection.rightCols(n2) = MatrixXd::Identity(n2, n2);
    AlphaDensity sigma = AlphaDensity::on_identity_basis(0.5, n, 1.0);
    AlphaDensity zero1 = AlphaDensity::on_identity_basis(0.5, n1, 0.0);
    CHECK_THROWS_WITH_AS(quotient_density(sigma, zero1, pres),
                         "division by vanishing density", invalid_input);
  }
}

TEST_CASE("enhanced linear composition") {
  Rng rng(17);
  const int n = 1;  // V = R^2
  const MatrixXd omega = standard_omega(n);

  SUBCASE("identity is a two-sided unit") {
    for (int trial = 0; trial < 20; ++trial) {
      const MatrixXd t1 = random_symplectic(rng, n);
      const auto rel1 = LinearCanonicalRelation::graph(omega, omega, t1);
      AlphaDensity s1(0.5, 2 * n, complexd(rng.uniform(0.5, 1.5), rng.uniform(-1, 1)),
                      random_invertible(rng, 2 * n));
      const auto id = LinearCanonicalRelation::identity(omega);
      const AlphaDensity lam = graph_liouville_pull(id);

      const auto right = compose_enhanced_linear(rel1, s1, id, lam);
      // composed relation spans rel1; compare on the composed basis
      const MatrixXd x =
          rel1.basis_l.colPivHouseholderQr().solve(right.relation.basis_l);
      CHECK((rel1.basis_l * x - right.relation.basis_l).cwiseAbs().maxCoeff() < 1e-9);
      const complexd expected = s1.eval(x);
      const complexd got = right.density.eval(MatrixXd::Identity(2 * n, 2 * n));
      CHECK(std::abs(got - expected) < 1e-10 * std::abs(expected));

      const auto left = compose_enhanced_linear(id, lam, rel1, s1);
      const MatrixXd xl =
          rel1.basis_l.colPivHouseholderQr().solve(left.relation.basis_l);
      const complexd expected_l = s1.eval(xl);
      const complexd got_l = left.density.eval(MatrixXd::Identity(2 * n, 2 * n));
      CHECK(std::abs(got_l - expected_l) < 1e-10 * std::abs(expected_l));
    }
  }

  SUBCASE("graphs of symplectomorphisms compose to the graph of the product") {
    for (int trial = 0; trial < 20; ++trial) {
      const MatrixXd t1 = random_symplectic(rng, n);
      const MatrixXd t2 = random_symplectic(rng, n);
      const auto rel1 = LinearCanonicalRelation::graph(omega, omega, t1);
      const auto rel2 = LinearCanonicalRelation::graph(omega, omega, t2);
      const auto out = compose_enhanced_linear(rel1, graph_liouville_pull(rel1),
                                               rel2, graph_liouville_pull(rel2));
      const auto expected_rel = LinearCanonicalRelation::graph(omega, omega, t2 * t1);
      // same subspace
      const MatrixXd x = expected_rel.basis_l.colPivHouseholderQr().solve(
          out.relation.basis_l);
      CHECK((expected_rel.basis_l * x - out.relation.basis_l).cwiseAbs().maxCoeff() <
            1e-9);
      // value matches the Liouville pull of the composed graph
      const complexd expected = graph_liouville_pull(expected_rel).eval(x);
      const complexd got = out.density.eval(MatrixXd::Identity(2 * n, 2 * n));
      CHECK(std::abs(got - expected) < 1e-9 * std::abs(expected));
    }
  }

  SUBCASE("diagonal composition against a hand-built evaluation") {
    // L1 = L2 = diagonal, arbitrary enhancements; independent choice of
    // fiber basis and complement in the defining formula
    AlphaDensity s1(0.5, 2, complexd(1.2, 0.1), random_invertible(rng, 2));
    AlphaDensity s2(0.5, 2, complexd(0.7, -0.4), random_invertible(rng, 2));
    const auto id = LinearCanonicalRelation::identity(omega);
    const auto out = compose_enhanced_linear(id, s1, id, s2);

    // manual route: fiber basis {(a, a)} with a = e1, e2 (coefficients in the
    // two copies), complement {(a, 0)}; tau(complement) = a
    MatrixXd fiber(4, 2);
    fiber << 1, 0, 0, 1, 1, 0, 0, 1;
    MatrixXd comp(4, 2);
    comp << 1, 0, 0, 1, 0, 0, 0, 0;
    MatrixXd prod_ref = MatrixXd::Zero(4, 4);
    prod_ref.topLeftCorner(2, 2) = s1.ref_basis;
    prod_ref.bottomRightCorner(2, 2) = s2.ref_basis;
    AlphaDensity product(0.5, 4, s1.ref_value * s2.ref_value, prod_ref);
    MatrixXd combined(4, 4);
    combined << fiber, comp;
    const MatrixXd tau = MatrixXd::Identity(2, 2);  // tau(comp) = identity
    const complexd manual =
        product.eval(combined) / liouville_half_density(omega).eval(tau);
    // manual value sits on alpha(fiber) = identity coefficients of L
    const complexd via_impl = value_on(out.density, out.relation.basis_l,
                                       id.basis_l);
    CHECK(std::abs(via_impl - manual) < 1e-11 * std::abs(manual));
  }

  SUBCASE("associativity on random graph triples") {
    const int n2 = 2;  // V = R^4
    const MatrixXd omega4 = standard_omega(n2);
    for (int trial = 0; trial < 30; ++trial) {
      const MatrixXd t1 = random_symplectic(rng, n2);
      const MatrixXd t2 = random_symplectic(rng, n2);
      const MatrixXd t3 = random_symplectic(rng, n2);
      const auto rel1 = LinearCanonicalRelation::graph(omega4, omega4, t1);
      const auto rel2 = LinearCanonicalRelation::graph(omega4, omega4, t2);
      const auto rel3 = LinearCanonicalRelation::graph(omega4, omega4, t3);
      AlphaDensity s1(0.5, 4, complexd(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5)),
                      random_invertible(rng, 4));
      AlphaDensity s2(0.5, 4, complexd(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5)),
                      random_invertible(rng, 4));
      AlphaDensity s3(0.5, 4, complexd(rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5)),
                      random_invertible(rng, 4));

      const auto left_inner = compose_enhanced_linear(rel1, s1, rel2, s2);
      const auto left = compose_enhanced_linear(left_inner.relation,
                                                left_inner.density, rel3, s3);
      const auto right_inner = compose_enhanced_linear(rel2, s2, rel3, s3);
      const auto right = compose_enhanced_linear(rel1, s1, right_inner.relation,
                                                 right_inner.density);

      const complexd va = left.density.eval(MatrixXd::Identity(4, 4));
      const complexd vb = value_on(right.density, right.relation.basis_l,
                                   left.relation.basis_l);
      CHECK(std::abs(va - vb) < 1e-9 * std::abs(va));
    }
  }

  SUBCASE("non-transverse input errors out") {
    // lines x rather than graphs: the middle equation drops rank
    MatrixXd basis(4, 2);
    basis << 1, 0, 0, 0, 0, 1, 0, 0;  // span{(q;0),(0;q)} in (q,p) x (q,p)
    LinearCanonicalRelation rel;
    rel.omega1 = omega;
    rel.omega2 = omega;
    rel.basis_l = basis;
    rel.validate();
    AlphaDensity s1 = AlphaDensity::on_identity_basis(0.5, 2, 1.0);
    CHECK_THROWS_AS(compose_enhanced_linear(rel, s1, rel, s1), domain_error);
  }
}

TEST_CASE("graph enhancement composition") {
  Rng rng(23);

  SUBCASE("identity second factor returns the first enhancement") {
    const int amb = 4;  // S2 = R^4 symplectic
    const MatrixXd omega = standard_omega(2);
    GraphTangentData f1;
    f1.df = random_matrix(rng, amb, 3);  // some 3-dim domain mapping onto S2
    AlphaDensity s1(0.5, 3, complexd(1.1, 0.3), random_invertible(rng, 3));
    const MatrixXd td2 = MatrixXd::Identity(amb, amb);
    const AlphaDensity lam = liouville_half_density(omega);
    const auto out = compose_graph_enhancements(f1, s1, td2, lam, omega);
    CHECK(out.density.dim == 3);
    const complexd expected = s1.eval(out.d0_basis);
    CHECK(std::abs(out.density.eval(MatrixXd::Identity(3, 3)) - expected) <
          1e-12 * std::abs(expected));
  }

  SUBCASE("complement independence") {
    const int amb = 4;
    const MatrixXd omega = standard_omega(2);
    for (int trial = 0; trial < 20; ++trial) {
      GraphTangentData f1;
      f1.df = random_matrix(rng, amb, 5);
      const MatrixXd td2 = random_matrix(rng, amb, 2);
      AlphaDensity s1(0.5, 5, complexd(0.8, 0.1), random_invertible(rng, 5));
      AlphaDensity s2(0.5, 2, complexd(1.4, -0.2), random_invertible(rng, 2));
      const auto base = compose_graph_enhancements(f1, s1, td2, s2, omega);
      // a different complement: orthogonal one mixed with d0 directions
      const int r = static_cast<int>(base.d0_basis.cols());
      MatrixXd other = nullspace(base.d0_basis.transpose());
      other += base.d0_basis * random_matrix(rng, r, 5 - r);
      const auto again = compose_graph_enhancements(f1, s1, td2, s2, omega, other);
      const complexd a = base.density.eval(MatrixXd::Identity(r, r));
      const complexd b = again.density.eval(MatrixXd::Identity(r, r));
      CHECK(std::abs(a - b) < 1e-11 * std::abs(a));
    }
  }

  SUBCASE("fiberwise addition bookkeeping on the zero-structure groupoid") {
    // G = T*R, m fiberwise addition; composing sigma o (sigma x lambda)
    // multiplies the two cochain values and leaves the frame factor intact
    auto f = [](double a1, double a2) {
      return complexd(1.0 + 0.3 * a1 - 0.2 * a2 + 0.1 * a1 * a2, 0.2 * a1 * a2);
    };
    const double a1 = 0.4, a2 = -0.7, a3 = 0.25;

    // frames: TG^{(2)} coords (x, p1, p2); TG coords (x, p)
    MatrixXd pair_frame(4, 3);
    pair_frame << 1, 0, 0,  // x row of first arrow
        0, 1, 0,            // p row of first arrow
        1, 0, 0,            // x row of second arrow
        0, 0, 1;            // p row of second arrow
    // f1 = m x id on D1 = G^{(2)} x G with coords (x, p1, p2, x3, p3),
    // mapping to ((x, p1+p2), (x3, p3))
    MatrixXd df(4, 5);
    df << 1, 0, 0, 0, 0,
          0, 1, 1, 0, 0,
          0, 0, 0, 1, 0,
          0, 0, 0, 0, 1;

    // G x G coordinates are (x_a, p_a, x_b, p_b)
    MatrixXd omega_gg = MatrixXd::Zero(4, 4);
    omega_gg(0, 1) = 1;
    omega_gg(1, 0) = -1;
    omega_gg(2, 3) = 1;
    omega_gg(3, 2) = -1;

    // sigma on the pair frame carries value f(arrow momenta), sigma^c = 1
    AlphaDensity sigma1 =
        AlphaDensity::on_identity_basis(0.5, 5, f(a1, a2) * complexd(1.0));
    AlphaDensity sigma2 =
        AlphaDensity::on_identity_basis(0.5, 3, f(a1 + a2, a3) * complexd(1.0));

    GraphTangentData f1{df};
    const auto out =
        compose_graph_enhancements(f1, sigma1, pair_frame, sigma2, omega_gg);
    CHECK(out.density.dim == 4);

    // expected: product of cochain values times the canonical frame factor
    // mu x mu~ x mu~ x mu~ on the returned D0 basis; D0 coords here are
    // (x, p1, p2, p3) read from the D1 frame
    MatrixXd projected(4, 4);
    projected.row(0) = out.d0_basis.row(0);  // x
    projected.row(1) = out.d0_basis.row(1);  // p1
    projected.row(2) = out.d0_basis.row(2);  // p2
    projected.row(3) = out.d0_basis.row(4);  // p3
    const complexd frame_factor =
        std::pow(std::abs(projected.determinant()), 0.5);
    const complexd expected = f(a1, a2) * f(a1 + a2, a3) * frame_factor;
    const complexd got = out.density.eval(MatrixXd::Identity(4, 4));
    CHECK(std::abs(got - expected) < 1e-11 * std::abs(expected));

    // and the opposite bracketing gives f(a2,a3) f(a1, a2+a3); equality of the
    // two would be the cocycle equation for f
    MatrixXd df_right(4, 5);  // id x m on coords (x1,p1,x,p2,p3)
    df_right << 1, 0, 0, 0, 0,
                0, 1, 0, 0, 0,
                0, 0, 1, 0, 0,
                0, 0, 0, 1, 1;
    AlphaDensity sigma1r =
        AlphaDensity::on_identity_basis(0.5, 5, f(a2, a3) * complexd(1.0));
    AlphaDensity sigma2r =
        AlphaDensity::on_identity_basis(0.5, 3, f(a1, a2 + a3) * complexd(1.0));
    const auto out_r = compose_graph_enhancements(GraphTangentData{df_right},
                                                  sigma1r, pair_frame, sigma2r,
                                                  omega_gg);
    MatrixXd projected_r(4, 4);
    projected_r.row(0) = out_r.d0_basis.row(0);
    projected_r.row(1) = out_r.d0_basis.row(1);
    projected_r.row(2) = out_r.d0_basis.row(3);
    projected_r.row(3) = out_r.d0_basis.row(4);
    const complexd frame_factor_r =
        std::pow(std::abs(projected_r.determinant()), 0.5);
    const complexd expected_r = f(a2, a3) * f(a1, a2 + a3) * frame_factor_r;
    const complexd got_r = out_r.density.eval(MatrixXd::Identity(4, 4));
    CHECK(std::abs(got_r - expected_r) < 1e-11 * std::abs(expected_r));
  }
}
