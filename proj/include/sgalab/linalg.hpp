#pragma once

#include <Eigen/Dense>

#include "sgalab/common.hpp"

namespace sgalab {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LsqResult {
  VectorXd solution;     // minimal-norm least-squares solution
  int rank = 0;
  int kernel_dim = 0;    // unknowns minus rank
  double residual = 0.0; // |A x - b|
};

// Minimal-norm least squares via SVD; singular values below
// threshold * sigma_max are treated as zero.
LsqResult solve_least_squares(const MatrixXd& a, const VectorXd& b,
                              double threshold = 1e-10);

// Orthonormal basis of the nullspace of `a` (columns). Relative singular
// value threshold as above.
MatrixXd nullspace(const MatrixXd& a, double threshold = 1e-8);

// Smallest/largest singular value ratio; 0 for empty matrices.
double condition_gap(const MatrixXd& a);

// Matrix exponential, scaling and squaring with a truncated Taylor series.
MatrixXd expm(const MatrixXd& a);

// Principal logarithm for matrices near the identity (|A - I| < 1).
MatrixXd logm_near_identity(const MatrixXd& a);

// Directional derivative D exp(a)[da] through the block-triangular trick.
MatrixXd expm_derivative(const MatrixXd& a, const MatrixXd& da);

// Analytic functions of a matrix argument by truncated Taylor series
// (order 20); callers guard |a| < 1.
MatrixXd sinhc_half(const MatrixXd& a);   // sinh(a/2) / (a/2)
MatrixXd exp_ratio_neg(const MatrixXd& a); // (1 - e^{-a}) / a
MatrixXd exp_ratio_pos(const MatrixXd& a); // (e^{a} - 1) / a

double operator_norm(const MatrixXd& a);

}  // namespace sgalab
