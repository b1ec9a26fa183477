#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgalab/liecase.hpp"

using namespace sgalab;
using namespace sgalab::poisson;
using namespace sgalab::liecase;

namespace {

VectorXd random_vec(Rng& rng, int n, double scale) {
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.uniform(-scale, scale);
  return v;
}

}  // namespace

TEST_CASE("bivector evaluation") {
  const PoissonStructure zero = zero_structure(3);
  CHECK(zero.eval(VectorXd::Random(3)).cwiseAbs().maxCoeff() == 0.0);

  const PoissonStructure lin = lie_to_poisson(so3());
  VectorXd x(3);
  x << 0, 0, 1;
  MatrixXd expected(3, 3);
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  CHECK((lin.eval(x) - expected).cwiseAbs().maxCoeff() < 1e-15);

  const PoissonStructure cst = constant_symplectic2();
  MatrixXd expected2(2, 2);
  expected2 << 0, 1, -1, 0;
  CHECK((cst.eval(VectorXd::Random(2)) - expected2).cwiseAbs().maxCoeff() < 1e-15);

  // jet rows carry exact polynomial derivatives
  XJetVector seed{XJetScalar::variable(x(0), 0, 3), XJetScalar::variable(x(1), 1, 3),
                  XJetScalar::variable(x(2), 2, 3)};
  const auto rows = lin.eval_jet_rows(seed);
  CHECK(rows[0][1].value == doctest::Approx(-1.0));
  CHECK(rows[0][1].grad(2) == doctest::Approx(-1.0));  // d/dx3 of -x3
}

TEST_CASE("jacobi residual") {
  Rng rng(2);
  std::vector<PoissonStructure> good = {
      zero_structure(3), constant_symplectic2(), quadratic_demo(),
      lie_to_poisson(so3()), lie_to_poisson(sl2()), lie_to_poisson(heisenberg3()),
      lie_to_poisson(aff1()), lie_to_poisson(abelian2())};
  for (const auto& pi : good)
    for (int trial = 0; trial < 100; ++trial)
      CHECK(pi.jacobi_residual(random_vec(rng, pi.dim(), 1.0)) < 1e-12);

  // constants that genuinely violate the Jacobi identity
  LieAlgebraData broken;
  broken.dim = 3;
  broken.id = "broken";
  broken.c.assign(27, 0.0);
  broken.set_structure_constant(0, 1, 1, 1.0);
  broken.set_structure_constant(0, 2, 2, 1.0);
  broken.set_structure_constant(1, 2, 0, 1.0);
  CHECK(broken.lie_jacobi_residual() > 0.5);
  CHECK_THROWS_AS(broken.validate(), invalid_input);
  const PoissonStructure bad = lie_to_poisson(broken);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial)
    worst = std::max(worst, bad.jacobi_residual(random_vec(rng, 3, 1.0)));
  CHECK(worst > 0.1);

  // the fully cyclic pattern c^{12}_3 = c^{23}_1 = c^{13}_2 = 1 is a genuine
  // Lie algebra (so(2,1)-type), so its residual vanishes
  LieAlgebraData cyc;
  cyc.dim = 3;
  cyc.id = "so21";
  cyc.c.assign(27, 0.0);
  cyc.set_structure_constant(0, 1, 2, 1.0);
  cyc.set_structure_constant(1, 2, 0, 1.0);
  cyc.set_structure_constant(0, 2, 1, 1.0);
  CHECK(cyc.lie_jacobi_residual() < 1e-15);
  const PoissonStructure so21 = lie_to_poisson(cyc);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(so21.jacobi_residual(random_vec(rng, 3, 1.0)) < 1e-14);
}

TEST_CASE("linear structures scale linearly") {
  Rng rng(5);
  const PoissonStructure lin = lie_to_poisson(sl2());
  for (int trial = 0; trial < 10; ++trial) {
    const VectorXd x = random_vec(rng, 3, 1.0);
    CHECK((lin.eval(2.0 * x) - 2.0 * lin.eval(x)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("structure config parsing") {
  const std::string pi_text = R"({
    "dim": 2, "id": "custom",
    "pi": [ {"i": 0, "j": 1, "terms": [ {"exps": [0,0], "c": 1.0},
                                        {"exps": [2,0], "c": 0.5} ]} ]
  })";
  const StructureConfig cfg = parse_structure_json(pi_text);
  REQUIRE(cfg.pi.has_value());
  VectorXd x(2);
  x << 2.0, 0.0;
  CHECK(cfg.pi->eval(x)(0, 1) == doctest::Approx(3.0));

  const std::string lie_text = R"({
    "lie": { "dim": 3, "id": "so3-json",
             "c": [[0,1,2,1.0],[1,2,0,1.0],[2,0,1,1.0]] }
  })";
  const StructureConfig lcfg = parse_structure_json(lie_text);
  REQUIRE(lcfg.lie.has_value());
  CHECK(lcfg.lie->structure_constant(1, 0, 2) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(parse_structure_json("{ not json"), invalid_input);
  CHECK_THROWS_AS(builtin_structure("nope"), invalid_input);
}

TEST_CASE("bch basics and oracles") {
  Rng rng(9);

  SUBCASE("abelian input adds") {
    const LieAlgebraData ab = abelian2();
    const VectorXd p1 = random_vec(rng, 2, 0.4), p2 = random_vec(rng, 2, 0.4);
    CHECK((bch(ab, p1, p2, 8) - (p1 + p2)).cwiseAbs().maxCoeff() < 1e-16);
  }

  SUBCASE("heisenberg terminates at degree two") {
    const LieAlgebraData h = heisenberg3();
    const VectorXd p1 = random_vec(rng, 3, 0.3), p2 = random_vec(rng, 3, 0.3);
    const VectorXd expected = p1 + p2 + 0.5 * h.bracket(p1, p2);
    CHECK((bch(h, p1, p2, 10) - expected).cwiseAbs().maxCoeff() < 1e-15);
    const VectorXd oracle = bch_matrix_log_oracle(h, p1, p2);
    CHECK((oracle - expected).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("matrix-log oracle agreement for so3 and sl2") {
    for (const auto& lie : {so3(), sl2()}) {
      for (int trial = 0; trial < 10; ++trial) {
        const VectorXd p1 = random_vec(rng, 3, 0.12);
        const VectorXd p2 = random_vec(rng, 3, 0.12);
        const VectorXd z = bch(lie, p1, p2, 10);
        const VectorXd oracle = bch_matrix_log_oracle(lie, p1, p2);
        CHECK((z - oracle).cwiseAbs().maxCoeff() < 5e-9);
      }
    }
  }

  SUBCASE("graded pieces at orders two and three") {
    const LieAlgebraData lie = so3();
    const VectorXd p1 = random_vec(rng, 3, 0.5), p2 = random_vec(rng, 3, 0.5);
    const VectorXd z2 = bch(lie, p1, p2, 2) - bch(lie, p1, p2, 1);
    CHECK((z2 - 0.5 * lie.bracket(p1, p2)).cwiseAbs().maxCoeff() < 1e-14);
    const VectorXd z3 = bch(lie, p1, p2, 3) - bch(lie, p1, p2, 2);
    const VectorXd expected3 = (lie.bracket(p1, lie.bracket(p1, p2)) +
                                lie.bracket(p2, lie.bracket(p2, p1))) /
                               12.0;
    CHECK((z3 - expected3).cwiseAbs().maxCoeff() < 1e-14);
    // order-2 and order-3 coefficients of the polynomial form
    const auto series = bch_series(lie, 3);
    // coefficient of p1_0 p2_1 in component 2 equals 1/2 c^{01}_2 = 1/2
    Poly comp2 = series[2];
    std::uint64_t key = Poly::key_of_var(0) + Poly::key_of_var(4);
    CHECK(comp2.terms().at(key) == doctest::Approx(0.5));
  }

  SUBCASE("coefficient-level symmetries") {
    for (const auto& lie : {so3(), sl2(), heisenberg3(), aff1()}) {
      const int n = lie.dim;
      const auto series = bch_series(lie, 6);
      // bch(p, 0) = p and bch(0, p) = p
      for (int k = 0; k < n; ++k)
        for (const auto& [key, coeff] : series[k].terms()) {
          bool pure1 = true, pure2 = true;
          for (int v = 0; v < n; ++v) {
            if (Poly::exponent(key, n + v) > 0) pure1 = false;
            if (Poly::exponent(key, v) > 0) pure2 = false;
          }
          if (pure1 || pure2) {
            const bool is_linear = Poly::key_degree(key) == 1;
            if (!is_linear) CHECK(std::abs(coeff) < 1e-15);
          }
        }
      // bch(p1,p2) = -bch(-p2,-p1): swap blocks, negate variables and sign
      for (int k = 0; k < n; ++k) {
        Poly transformed(2 * n);
        for (const auto& [key, coeff] : series[k].terms()) {
          std::vector<int> e(2 * n, 0);
          int deg = 0;
          for (int v = 0; v < n; ++v) {
            e[n + v] = Poly::exponent(key, v);
            e[v] = Poly::exponent(key, n + v);
            deg += e[v] + e[n + v];
          }
          const double sign = (deg % 2 == 0 ? 1.0 : -1.0);
          transformed.add_term(e, -sign * coeff);
        }
        CHECK((transformed - series[k]).is_zero(1e-14));
      }
      // bch(p, -p) = 0
      for (int trial = 0; trial < 5; ++trial) {
        const VectorXd p = random_vec(rng, n, 0.4);
        CHECK(bch(lie, p, -p, 8).cwiseAbs().maxCoeff() < 1e-15);
        const VectorXd q = bch(lie, p, VectorXd::Zero(n), 8);
        CHECK((q - p).cwiseAbs().maxCoeff() < 1e-15);
      }
    }
  }

  SUBCASE("numeric bch matches the polynomial form") {
    const LieAlgebraData lie = sl2();
    const auto series = bch_series(lie, 6);
    for (int trial = 0; trial < 5; ++trial) {
      const VectorXd p1 = random_vec(rng, 3, 0.2), p2 = random_vec(rng, 3, 0.2);
      VectorXd joint(6);
      joint << p1, p2;
      const VectorXd z = bch(lie, p1, p2, 6);
      for (int k = 0; k < 3; ++k)
        CHECK(series[k].eval(joint) == doctest::Approx(z(k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("duflo factors") {
  Rng rng(13);

  SUBCASE("unit at the origin") {
    for (const auto& lie : {so3(), sl2(), heisenberg3(), aff1(), abelian2()}) {
      const auto f = duflo_factors(lie, VectorXd::Zero(lie.dim));
      CHECK(f.f_g == 1.0);
      CHECK(f.f_r == doctest::Approx(1.0));
      CHECK(f.f_k == doctest::Approx(1.0));
      CHECK(f.f_tilde == doctest::Approx(1.0));
    }
  }

  SUBCASE("so3 closed form") {
    const LieAlgebraData lie = so3();
    for (int trial = 0; trial < 20; ++trial) {
      const VectorXd p = random_vec(rng, 3, 0.3);
      const double r = p.norm();
      const auto f = duflo_factors(lie, p);
      const double expected = std::pow(std::sin(r / 2) / (r / 2), 2.0);
      CHECK(f.f_r == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("heisenberg is flat") {
    const LieAlgebraData lie = heisenberg3();
    const VectorXd p = random_vec(rng, 3, 0.4);
    const auto f = duflo_factors(lie, p);
    CHECK(f.f_r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.f_k == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("aff1 hyperbolic closed form") {
    const LieAlgebraData lie = aff1();
    const VectorXd p = random_vec(rng, 2, 0.4);
    const auto f = duflo_factors(lie, p);
    const double a = p(0);
    CHECK(f.f_r == doctest::Approx(std::sinh(a / 2) / (a / 2)).epsilon(1e-12));
  }

  SUBCASE("identities and guards") {
    for (const auto& lie : {so3(), sl2(), aff1()}) {
      for (int trial = 0; trial < 20; ++trial) {
        const VectorXd p = random_vec(rng, lie.dim, 0.25);
        const auto f = duflo_factors(lie, p);
        CHECK(std::abs(f.f_k * f.f_k - f.f_r) < 1e-12);
        const double det_half = expm(-0.5 * lie.ad(p)).determinant();
        CHECK(std::abs(f.f_tilde - det_half * f.f_r) < 1e-10);
      }
    }
    const LieAlgebraData lie = sl2();
    VectorXd big(3);
    big << 2.0, 0.0, 0.0;
    CHECK_THROWS_AS(duflo_factors(lie, big), domain_error);
  }
}

TEST_CASE("plane wave star product") {
  Rng rng(21);

  SUBCASE("gutt amplitude is one") {
    const LieAlgebraData lie = so3();
    const VectorXd p1 = random_vec(rng, 3, 0.1), p2 = random_vec(rng, 3, 0.1);
    const auto out = plane_wave_star(lie, FactorChoice::gutt, p1, p2);
    CHECK(out.amplitude == 1.0);
    CHECK((out.p_out - bch(lie, p1, p2, 10)).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("abelian amplitude is a symmetric cocycle, still associative") {
    const LieAlgebraData lie = abelian2();
    const VectorXd p1 = random_vec(rng, 2, 0.2), p2 = random_vec(rng, 2, 0.2);
    const auto out = plane_wave_star(lie, FactorChoice::kontsevich, p1, p2);
    CHECK(out.amplitude == doctest::Approx(1.0));  // ad = 0 makes F constant
  }

  SUBCASE("amplitude cocycle identity on random triples") {
    for (const auto& lie : {so3(), sl2(), heisenberg3(), aff1(), abelian2()}) {
      for (const auto choice : {FactorChoice::gutt, FactorChoice::rieffel,
                                FactorChoice::kontsevich}) {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
          const VectorXd p1 = random_vec(rng, lie.dim, 0.04);
          const VectorXd p2 = random_vec(rng, lie.dim, 0.04);
          const VectorXd p3 = random_vec(rng, lie.dim, 0.04);
          const auto a12 = plane_wave_star(lie, choice, p1, p2);
          const auto left = plane_wave_star(lie, choice, a12.p_out, p3);
          const auto a23 = plane_wave_star(lie, choice, p2, p3);
          const auto right = plane_wave_star(lie, choice, p1, a23.p_out);
          worst = std::max(worst, std::abs(a12.amplitude * left.amplitude -
                                           a23.amplitude * right.amplitude));
        }
        CHECK(worst < 1e-10);
      }
    }
  }
}

TEST_CASE("coadjoint action groupoid") {
  Rng rng(31);
  const LieAlgebraData lie = so3();

  SUBCASE("units and inverse") {
    const VectorXd x = random_vec(rng, 3, 1.0);
    ActionGroupoidElement unit{VectorXd::Zero(3), x};
    CHECK((action_source(lie, unit) - x).norm() == 0.0);
    CHECK((action_target(lie, unit) - x).norm() < 1e-15);

    ActionGroupoidElement g{random_vec(rng, 3, 0.3), x};
    const auto inv = action_inverse(lie, g);
    CHECK((action_source(lie, inv) - action_target(lie, g)).norm() < 1e-12);
    CHECK((action_target(lie, inv) - action_source(lie, g)).norm() < 1e-12);
  }

  SUBCASE("unit law and composability guard") {
    const VectorXd x = random_vec(rng, 3, 1.0);
    ActionGroupoidElement g{random_vec(rng, 3, 0.3), x};
    ActionGroupoidElement unit{VectorXd::Zero(3), x};
    const auto prod = action_multiply(lie, g, unit);
    CHECK((prod.a - g.a).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((prod.x - g.x).cwiseAbs().maxCoeff() == 0.0);

    ActionGroupoidElement far{random_vec(rng, 3, 0.3), x + VectorXd::Ones(3)};
    CHECK_THROWS_AS(action_multiply(lie, g, far), invalid_input);
  }

  SUBCASE("coadjoint matrix against the representation oracle") {
    // Ad*_{exp a} = exp(-ad_a)^T and t o m = t o pr1 on composable pairs
    for (int trial = 0; trial < 10; ++trial) {
      const VectorXd a2 = random_vec(rng, 3, 0.25);
      const VectorXd x2 = random_vec(rng, 3, 1.0);
      ActionGroupoidElement g2{a2, x2};
      ActionGroupoidElement g1{random_vec(rng, 3, 0.25), action_target(lie, g2)};
      const auto prod = action_multiply(lie, g1, g2);
      CHECK((action_target(lie, prod) - action_target(lie, g1)).norm() < 5e-11);
      CHECK((action_source(lie, prod) - action_source(lie, g2)).norm() == 0.0);
    }
  }

  SUBCASE("associativity on composable triples") {
    for (int trial = 0; trial < 20; ++trial) {
      const VectorXd x3 = random_vec(rng, 3, 1.0);
      ActionGroupoidElement g3{random_vec(rng, 3, 0.15), x3};
      ActionGroupoidElement g2{random_vec(rng, 3, 0.15), action_target(lie, g3)};
      ActionGroupoidElement g1{random_vec(rng, 3, 0.15), action_target(lie, g2)};
      const auto left = action_multiply(lie, action_multiply(lie, g1, g2), g3);
      const auto right = action_multiply(lie, g1, action_multiply(lie, g2, g3));
      CHECK((left.a - right.a).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((left.x - right.x).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  SUBCASE("derivative of the coadjoint matrix") {
    const VectorXd a = random_vec(rng, 3, 0.3);
    const VectorXd da = random_vec(rng, 3, 1.0);
    const double h = 1e-6;
    const MatrixXd fd =
        (coadjoint(lie, a + h * da) - coadjoint(lie, a - h * da)) / (2 * h);
    const MatrixXd an = coadjoint_derivative(lie, a, da);
    CHECK((fd - an).cwiseAbs().maxCoeff() < 1e-9);
  }
}
