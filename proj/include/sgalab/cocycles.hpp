#pragma once

#include "sgalab/densities.hpp"
#include "sgalab/groupoid.hpp"

namespace sgalab {
namespace cocycles {

using groupoid::Cochain2Eval;
using groupoid::GeneratingFunction;
using groupoid::PairChart;

// 1-cochain on arrows, g = (x, p)
using Cochain1Eval = std::function<complexd(const VectorXd& x, const VectorXd& p)>;

// polynomial cochains: real and imaginary parts as p-series with polynomial
// coefficients in x (1-cochains use n covector variables, 2-cochains 2n)
struct PolyCochain1 {
  Series<Poly> re, im;
  complexd eval(const VectorXd& x, const VectorXd& p) const;
};

struct PolyCochain2 {
  Series<Poly> re, im;
  complexd eval(const VectorXd& p1, const VectorXd& p2, const VectorXd& x) const;
  Cochain2Eval evaluator() const;
};

PolyCochain1 zero_cochain1(int n, int order);
PolyCochain2 zero_cochain2(int n, int order);

// multiplicative differential of a 2-cochain at a composable triple, given in
// the (p1, p2, p3, x) chart; 1 means the cocycle condition holds there
complexd delta_mult(const Cochain2Eval& f, const GeneratingFunction& s,
                    const VectorXd& p1, const VectorXd& p2, const VectorXd& p3,
                    const VectorXd& x);

// additive counterpart
complexd delta_add(const Cochain2Eval& h, const GeneratingFunction& s,
                   const VectorXd& p1, const VectorXd& p2, const VectorXd& p3,
                   const VectorXd& x);

// differentials of 1-cochains over a composable pair
complexd delta_mult1(const Cochain1Eval& kappa, const GeneratingFunction& s,
                     const PairChart& chart);
complexd delta_add1(const Cochain1Eval& h, const GeneratingFunction& s,
                    const PairChart& chart);

struct UnitPropagationResidual {
  double left_unit = 0.0;   // |f(1_t(g), g) - f(1,1)|
  double right_unit = 0.0;  // |f(g, 1_s(g)) - f(1,1)|
  double inverse = 0.0;     // defect of the inverse identity
};

UnitPropagationResidual unit_propagation_residual(const Cochain2Eval& f,
                                                  const GeneratingFunction& s,
                                                  const VectorXd& x,
                                                  const VectorXd& p);

struct IdentityAxiomResidual {
  double right = 0.0;  // composing with the unit enhancement on the right
  double left = 0.0;   // and on the left
  double mu = 0.0;     // defect of mu_sigma against mu / f(1,1)
};

// Verifies the enhanced identity axiom for sigma = f sigma^c at the arrow
// (x, p) through the linear density calculus.
IdentityAxiomResidual identity_axiom_residual(const Cochain2Eval& f,
                                              const GeneratingFunction& s,
                                              const spray::SprayRealization& spray,
                                              const VectorXd& x, const VectorXd& p);

struct VanEstSplit {
  MatrixXd symmetric;
  MatrixXd skew;
  bool symmetric_pass = false;  // |skew| below tolerance
};

// mixed second derivative of h at (0, 0, x), split into symmetric and skew
// parts; the skew part is the obstruction class at the zero structure
VanEstSplit symmetry_and_vanest0(const Cochain2Eval& h, const VectorXd& x,
                                 double tol = 1e-8, double fd_step = 1e-4);
VanEstSplit symmetry_and_vanest0(const PolyCochain2& h, const VectorXd& x,
                                 double tol = 1e-8);

struct CoboundaryResult {
  bool success = false;
  PolyCochain1 primitive;
  double residual = 0.0;      // coefficient-level defect of delta h' = h
  int failed_degree = -1;     // first degree that could not be solved
  MatrixXd obstruction_skew;  // skew van Est part of the failed block
};

// Solves delta_0 h' = h on the zero-structure groupoid (fiberwise addition),
// degree by degree over polynomial coefficients. h must be normalized.
CoboundaryResult coboundary_solve_pi0(const PolyCochain2& h, int max_degree);

// additive differential on the zero-structure groupoid (fiberwise addition)
PolyCochain2 delta0_of(const PolyCochain1& h1, int order2);

// graded coboundary solver over the spray groupoid: recursion on the p-degree
// with the zero-structure solver at each step
struct GradedCoboundaryResult {
  bool success = false;
  PolyCochain1 primitive;
  double residual = 0.0;
  int failed_degree = -1;
  std::string failure_reason;
};

GradedCoboundaryResult graded_coboundary_solve(const PolyCochain2& h,
                                               const GeneratingFunction& s,
                                               int max_degree);

// additive differential of a polynomial 1-cochain through the groupoid
// multiplication, as a symbolic series in the pair chart
PolyCochain2 delta1_symbolic(const PolyCochain1& h1, const GeneratingFunction& s);

// additive differential of a polynomial 2-cochain over composable triples
struct TripleCochain {
  Series<Poly> re, im;  // 3n covector variables
};
TripleCochain delta2_symbolic(const PolyCochain2& h, const GeneratingFunction& s,
                              int truncation);

}  // namespace cocycles
}  // namespace sgalab
