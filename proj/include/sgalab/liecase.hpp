#pragma once

#include "sgalab/densities.hpp"
#include "sgalab/poisson.hpp"

namespace sgalab {
namespace liecase {

using poisson::LieAlgebraData;

// Truncated BCH product p1 . p2 = log(exp p1 exp p2) through structure
// constants, graded recursion in the total degree. N <= 10.
VectorXd bch(const LieAlgebraData& lie, const VectorXd& p1, const VectorXd& p2,
             int order);

// BCH as a polynomial map: component k is a polynomial in 2n variables
// (p1 block first, then p2 block), all terms of total degree <= order.
std::vector<Poly> bch_series(const LieAlgebraData& lie, int order);

// matrix-log oracle log(exp X exp Y) in a faithful representation,
// coordinates recovered by least squares; test support
VectorXd bch_matrix_log_oracle(const LieAlgebraData& lie, const VectorXd& p1,
                               const VectorXd& p2);

struct DufloFactors {
  double f_g = 1.0;
  double f_r = 1.0;
  double f_k = 1.0;
  double f_tilde = 1.0;
};

// F_G = 1, F_R = det(sinh(ad/2)/(ad/2)), F_K = F_R^{1/2},
// F~ = det((1 - e^{-ad})/ad); guard |ad_p| < 1.
DufloFactors duflo_factors(const LieAlgebraData& lie, const VectorXd& p);

enum class FactorChoice { gutt, rieffel, kontsevich };
FactorChoice factor_choice_from_string(const std::string& name);
double factor_value(const LieAlgebraData& lie, FactorChoice f, const VectorXd& p);

struct PlaneWaveProduct {
  VectorXd p_out;
  double amplitude = 1.0;
};

// exact action of the star product on plane waves:
// (BCH(p1,p2), F(p1) F(p2) / F(p1 . p2))
PlaneWaveProduct plane_wave_star(const LieAlgebraData& lie, FactorChoice f,
                                 const VectorXd& p1, const VectorXd& p2,
                                 int order = 10);

// coadjoint action of exp(a) on g* as a matrix: exp(-ad_a)^T
MatrixXd coadjoint(const LieAlgebraData& lie, const VectorXd& a);
// derivative of the coadjoint matrix in the direction da
MatrixXd coadjoint_derivative(const LieAlgebraData& lie, const VectorXd& a,
                              const VectorXd& da);

// left/right Maurer-Cartan matrices in exponential coordinates
MatrixXd theta_left(const LieAlgebraData& lie, const VectorXd& a);
MatrixXd theta_right(const LieAlgebraData& lie, const VectorXd& a);

struct ActionGroupoidElement {
  VectorXd a;  // local group element, exponential coordinates, |a| <= a_max
  VectorXd x;  // point of g*
};

constexpr double kDefaultAMax = 0.5;

VectorXd action_source(const LieAlgebraData& lie, const ActionGroupoidElement& g);
VectorXd action_target(const LieAlgebraData& lie, const ActionGroupoidElement& g);
ActionGroupoidElement action_inverse(const LieAlgebraData& lie,
                                     const ActionGroupoidElement& g);
ActionGroupoidElement action_multiply(const LieAlgebraData& lie,
                                      const ActionGroupoidElement& g1,
                                      const ActionGroupoidElement& g2,
                                      int order = 10, double tol = 1e-9);

// symplectic form of the action groupoid at (a, x), in (da, dx) block order
MatrixXd action_omega(const LieAlgebraData& lie, const VectorXd& a,
                      const VectorXd& x);

// 2-cochain on composable pairs of the action groupoid, trivialized as
// (a1, a2, x2)
using ActionCochain2 =
    std::function<complexd(const VectorXd&, const VectorXd&, const VectorXd&)>;

// Relative defect of the split-form associativity identity for sigma = f sigma^c
// at a composable triple, using explicit splittings in the trivialization.
double split_associativity_residual(const LieAlgebraData& lie,
                                    const ActionGroupoidElement& g1,
                                    const ActionGroupoidElement& g2,
                                    const ActionGroupoidElement& g3,
                                    const ActionCochain2& f, Rng& rng,
                                    int order = 10);

}  // namespace liecase
}  // namespace sgalab
