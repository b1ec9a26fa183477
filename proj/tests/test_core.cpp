#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgalab/series.hpp"

using namespace sgalab;

namespace {

// independent dense 1-variable polynomial oracle for composition tests
std::vector<double> brute_mul(const std::vector<double>& a,
                              const std::vector<double>& b, int order) {
  std::vector<double> r(order + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (i + j <= static_cast<std::size_t>(order)) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<double> brute_compose(const std::vector<double>& outer,
                                  const std::vector<double>& inner, int order) {
  std::vector<double> acc(order + 1, 0.0);
  std::vector<double> power(order + 1, 0.0);
  power[0] = 1.0;
  for (std::size_t k = 0; k < outer.size(); ++k) {
    for (int i = 0; i <= order; ++i) acc[i] += outer[k] * power[i];
    power = brute_mul(power, inner, order);
  }
  return acc;
}

Series<double> random_series(Rng& rng, int nvars, int order) {
  Series<double> s(nvars, order, 0.0);
  for (int i = 0; i < s.table().size(); ++i)
    s.coeff_at(i) = rng.uniform(-1.0, 1.0);
  return s;
}

double fd_step = 1e-5;

}  // namespace

TEST_CASE("xjet product rule matches finite differences") {
  const int n = 3;
  auto f = [](const VectorXd& x) { return x(0) * x(0) * x(1) + 2.0 * x(2); };
  auto g = [](const VectorXd& x) { return std::sin(1.0) * x(1) + x(0) * x(2) * x(2); };
  VectorXd x0(n);
  x0 << 0.3, -0.7, 0.9;

  auto lift = [&](auto&& fn) {
    XJetVector vars;
    for (int i = 0; i < n; ++i) vars.push_back(XJetScalar::variable(x0(i), i, n));
    // hand-built jets for the two sample functions
    XJetScalar a = vars[0] * vars[0] * vars[1] + 2.0 * vars[2];
    XJetScalar b = std::sin(1.0) * vars[1] + vars[0] * vars[2] * vars[2];
    return std::pair<XJetScalar, XJetScalar>(a, b);
  };
  auto [ja, jb] = lift(f);
  XJetScalar prod = ja * jb;

  auto fg = [&](const VectorXd& x) { return f(x) * g(x); };
  CHECK(prod.value == doctest::Approx(fg(x0)).epsilon(1e-14));
  for (int i = 0; i < n; ++i) {
    VectorXd xp = x0, xm = x0;
    xp(i) += fd_step;
    xm(i) -= fd_step;
    const double d = (fg(xp) - fg(xm)) / (2 * fd_step);
    CHECK(prod.grad(i) == doctest::Approx(d).epsilon(1e-6));
    for (int j = 0; j < n; ++j) {
      VectorXd xpp = x0, xpm = x0, xmp = x0, xmm = x0;
      xpp(i) += fd_step; xpp(j) += fd_step;
      xpm(i) += fd_step; xpm(j) -= fd_step;
      xmp(i) -= fd_step; xmp(j) += fd_step;
      xmm(i) -= fd_step; xmm(j) -= fd_step;
      const double h = (fg(xpp) - fg(xpm) - fg(xmp) + fg(xmm)) / (4 * fd_step * fd_step);
      CHECK(prod.hess(i, j) == doctest::Approx(h).epsilon(5e-5));
    }
  }
  CHECK((prod.hess - prod.hess.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("jet_inverse satisfies the implicit function theorem") {
  // F(z) = (z0 + 0.2 z1^2, z1 + 0.1 z0 z1)
  const int n = 2;
  VectorXd z(n);
  z << 0.4, -0.3;
  XJetVector vars;
  for (int i = 0; i < n; ++i) vars.push_back(XJetScalar::variable(z(i), i, n));
  XJetVector f{vars[0] + 0.2 * vars[1] * vars[1],
               vars[1] + 0.1 * vars[0] * vars[1]};
  XJetVector g = jet_inverse(f, z);

  // numeric inverse by Newton for finite differencing
  auto fwd = [](const VectorXd& w) {
    VectorXd r(2);
    r << w(0) + 0.2 * w(1) * w(1), w(1) + 0.1 * w(0) * w(1);
    return r;
  };
  auto inv = [&](const VectorXd& y) {
    VectorXd w = y;
    for (int it = 0; it < 60; ++it) {
      MatrixXd jac(2, 2);
      jac << 1.0, 0.4 * w(1), 0.1 * w(1), 1.0 + 0.1 * w(0);
      w -= jac.lu().solve(fwd(w) - y);
    }
    return w;
  };
  VectorXd y0(2);
  y0 << f[0].value, f[1].value;
  for (int k = 0; k < n; ++k) {
    CHECK(g[k].value == doctest::Approx(z(k)).epsilon(1e-12));
    for (int i = 0; i < n; ++i) {
      VectorXd yp = y0, ym = y0;
      yp(i) += fd_step;
      ym(i) -= fd_step;
      const double d = (inv(yp)(k) - inv(ym)(k)) / (2 * fd_step);
      CHECK(g[k].grad(i) == doctest::Approx(d).epsilon(1e-6));
      for (int j = 0; j < n; ++j) {
        VectorXd ypp = y0, ypm = y0, ymp = y0, ymm = y0;
        ypp(i) += fd_step; ypp(j) += fd_step;
        ypm(i) += fd_step; ypm(j) -= fd_step;
        ymp(i) -= fd_step; ymp(j) += fd_step;
        ymm(i) -= fd_step; ymm(j) -= fd_step;
        const double h =
            (inv(ypp)(k) - inv(ypm)(k) - inv(ymp)(k) + inv(ymm)(k)) /
            (4 * fd_step * fd_step);
        CHECK(g[k].hess(i, j) == doctest::Approx(h).epsilon(2e-4));
      }
    }
  }
}

TEST_CASE("poly arithmetic, derivative and jet evaluation") {
  Poly p = Poly::monomial({2, 0}, 1.0, 2) + Poly::monomial({0, 1}, -3.0, 2);
  Poly q = Poly::variable(0, 2) * Poly::variable(1, 2);
  Poly pq = p * q;
  VectorXd x(2);
  x << 1.5, -2.0;
  CHECK(pq.eval(x) == doctest::Approx(p.eval(x) * q.eval(x)).epsilon(1e-14));
  CHECK(p.derivative(0).eval(x) == doctest::Approx(2.0 * x(0)).epsilon(1e-14));
  CHECK(p.derivative(1).eval(x) == doctest::Approx(-3.0).epsilon(1e-14));

  XJetVector seed{XJetScalar::variable(x(0), 0, 2), XJetScalar::variable(x(1), 1, 2)};
  XJetScalar j = pq.eval_jet(seed);
  CHECK(j.value == doctest::Approx(pq.eval(x)).epsilon(1e-14));
  CHECK(j.grad(0) == doctest::Approx(pq.derivative(0).eval(x)).epsilon(1e-13));
  CHECK(j.hess(0, 1) ==
        doctest::Approx(pq.derivative(0).derivative(1).eval(x)).epsilon(1e-13));
}

TEST_CASE("series basics: (1+p)(1-p), partial derivative") {
  Series<double> one_plus(1, 3, 0.0), one_minus(1, 3, 0.0);
  one_plus.set_coeff({0}, 1.0);
  one_plus.set_coeff({1}, 1.0);
  one_minus.set_coeff({0}, 1.0);
  one_minus.set_coeff({1}, -1.0);
  Series<double> prod = one_plus * one_minus;
  CHECK(prod.coeff({0}) == 1.0);
  CHECK(prod.coeff({1}) == 0.0);
  CHECK(prod.coeff({2}) == -1.0);
  CHECK(prod.coeff({3}) == 0.0);

  Series<double> psq(1, 3, 0.0);
  psq.set_coeff({2}, 1.0);
  Series<double> dp = psq.partial(0);
  CHECK(dp.coeff({1}) == 2.0);
  CHECK(dp.coeff({0}) == 0.0);
}

TEST_CASE("series composition against brute-force oracle") {
  const int order = 3;
  // exp as a truncated series
  Series<double> exp_s(1, order, 0.0);
  std::vector<double> exp_coeffs;
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    exp_s.set_coeff({k}, 1.0 / fact);
    exp_coeffs.push_back(1.0 / fact);
  }
  Series<double> q(1, order, 0.0);
  q.set_coeff({1}, 1.0);
  q.set_coeff({2}, 1.0);

  Series<double> composed = compose(exp_s, {q});
  auto oracle = brute_compose(exp_coeffs, {0.0, 1.0, 1.0}, order);
  for (int k = 0; k <= order; ++k)
    CHECK(composed.coeff({k}) == doctest::Approx(oracle[k]).epsilon(1e-14));
  // frozen values from the oracle
  CHECK(composed.coeff({0}) == doctest::Approx(1.0));
  CHECK(composed.coeff({1}) == doctest::Approx(1.0));
  CHECK(composed.coeff({2}) == doctest::Approx(1.5));
  CHECK(composed.coeff({3}) == doctest::Approx(7.0 / 6.0));

  Series<double> bad(1, order, 0.0);
  bad.set_coeff({0}, 0.5);
  CHECK_THROWS_AS(compose(exp_s, {bad}), invalid_input);
}

TEST_CASE("series map inversion") {
  SUBCASE("identity") {
    Series<double> f(1, 4, 0.0);
    f.set_coeff({1}, 1.0);
    auto g = invert_series_map({f});
    CHECK(g[0].coeff({1}) == doctest::Approx(1.0));
    CHECK(g[0].coeff({2}) == doctest::Approx(0.0));
  }
  SUBCASE("p + p^2") {
    Series<double> f(1, 4, 0.0);
    f.set_coeff({1}, 1.0);
    f.set_coeff({2}, 1.0);
    auto g = invert_series_map({f});
    CHECK(g[0].coeff({1}) == doctest::Approx(1.0));
    CHECK(g[0].coeff({2}) == doctest::Approx(-1.0));
    CHECK(g[0].coeff({3}) == doctest::Approx(2.0));
    CHECK(g[0].coeff({4}) == doctest::Approx(-5.0));
    // two-sided inverse modulo truncation
    auto fg = compose(f, g);
    auto gf = compose(g[0], {f});
    for (int k = 0; k <= 4; ++k) {
      CHECK(fg.coeff({k}) == doctest::Approx(k == 1 ? 1.0 : 0.0).epsilon(1e-12));
      CHECK(gf.coeff({k}) == doctest::Approx(k == 1 ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
  SUBCASE("singular linear part") {
    Series<double> f(1, 4, 0.0);
    f.set_coeff({2}, 1.0);
    CHECK_THROWS_AS(invert_series_map({f}), invalid_input);
  }
  SUBCASE("invertible non-identity linear part, two variables") {
    Rng rng(11);
    std::vector<Series<double>> f(2, Series<double>(2, 4, 0.0));
    f[0].set_coeff({1, 0}, 2.0);
    f[0].set_coeff({0, 1}, 1.0);
    f[0].set_coeff({1, 1}, 0.3);
    f[1].set_coeff({0, 1}, 1.0);
    f[1].set_coeff({2, 0}, -0.5);
    auto g = invert_series_map(f);
    for (int i = 0; i < 2; ++i) {
      auto fg = compose(f[i], g);
      Series<double> expected(2, 4, 0.0);
      std::vector<int> e(2, 0);
      e[i] = 1;
      expected.set_coeff(e, 1.0);
      CHECK(coeff_max_abs(fg - expected) < 1e-12);
    }
  }
}

TEST_CASE("series ring axioms on random inputs") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = random_series(rng, 2, 5);
    auto b = random_series(rng, 2, 5);
    auto c = random_series(rng, 2, 5);
    CHECK(coeff_max_abs((a * b) * c - a * (b * c)) < 1e-13);
    CHECK(coeff_max_abs(a * b - b * a) < 1e-13);
    CHECK(coeff_max_abs(a * (b + c) - (a * b + a * c)) < 1e-13);
  }
}

TEST_CASE("upoly integrals") {
  UPoly<double> constant(0.0, 3.0);
  CHECK(constant.integral_unit() == doctest::Approx(3.0));

  UPoly<double> linear(0.0);
  linear.set_coeff(1, 4.0);  // 4u
  CHECK(linear.integral_unit() == doctest::Approx(2.0));

  UPoly<double> mixed(0.0);
  mixed.set_coeff(1, 2.0);  // (u^2 + u) * 2
  mixed.set_coeff(2, 2.0);
  CHECK(mixed.integral_unit() == doctest::Approx(2.0 * (1.0 / 3.0 + 1.0 / 2.0)));

  // antiderivative then evaluate at 1 agrees with the definite integral
  auto anti = mixed.integral_from_zero();
  double at_one = 0.0;
  for (int k = 0; k <= anti.udegree(); ++k) at_one += anti.coeff(k);
  CHECK(at_one == doctest::Approx(mixed.integral_unit()));
}

TEST_CASE("jet chain rule through series evaluation") {
  // series in one covector variable with polynomial coefficients in x
  const int n = 2;
  Series<Poly> s(1, 3, Poly(n));
  s.set_coeff({0}, Poly::variable(0, n) * Poly::variable(1, n));
  s.set_coeff({1}, Poly::monomial({2, 0}, 1.0, n));
  s.set_coeff({2}, Poly::variable(1, n) * 0.5);

  VectorXd p(1);
  p << 0.3;
  VectorXd x0(2);
  x0 << 0.7, -0.4;
  Poly collapsed = s.eval(p);
  XJetVector seed{XJetScalar::variable(x0(0), 0, n), XJetScalar::variable(x0(1), 1, n)};
  XJetScalar j = collapsed.eval_jet(seed);

  auto direct = [&](const VectorXd& x) {
    return x(0) * x(1) + x(0) * x(0) * p(0) + 0.5 * x(1) * p(0) * p(0);
  };
  CHECK(j.value == doctest::Approx(direct(x0)).epsilon(1e-14));
  for (int i = 0; i < n; ++i) {
    VectorXd xp = x0, xm = x0;
    xp(i) += fd_step;
    xm(i) -= fd_step;
    CHECK(j.grad(i) ==
          doctest::Approx((direct(xp) - direct(xm)) / (2 * fd_step)).epsilon(1e-6));
  }
}
