#pragma once

#include "sgalab/linalg.hpp"

namespace sgalab {
namespace densities {

// An alpha-density on an n-dimensional vector space. Bases are n x n matrices
// whose columns are expressed in whatever coordinate frame the caller fixed
// for that space; evaluation scales by |det|^alpha under change of basis.
struct AlphaDensity {
  double order = 0.5;
  int dim = 0;
  complexd ref_value{0.0, 0.0};
  MatrixXd ref_basis;  // columns form the reference basis

  AlphaDensity() = default;
  AlphaDensity(double order_, int dim_, complexd value, MatrixXd basis)
      : order(order_), dim(dim_), ref_value(value), ref_basis(std::move(basis)) {}

  static AlphaDensity on_identity_basis(double order, int dim, complexd value) {
    return AlphaDensity(order, dim, value, MatrixXd::Identity(dim, dim));
  }

  complexd eval(const MatrixXd& basis) const;
};

// Liouville half-density of a symplectic vector space: on a basis b its value
// is |det(b^T omega b)|^{1/4}, i.e. 1 on any standard symplectic basis.
AlphaDensity liouville_half_density(const MatrixXd& omega);

// Data of 0 -> V1 -> V -> V2 -> 0 with a chosen complement lift.
struct ShortExactPresentation {
  int ambient_dim = 0;
  MatrixXd basis_v1;    // ambient_dim x n1, injection image
  MatrixXd complement;  // ambient_dim x n2, lifts of a basis of V2
  MatrixXd projection;  // n2 x ambient_dim, realizes V -> V2

  void validate() const;
};

// sigma2 = sigma / sigma1 through the exact sequence. sigma's bases live in
// the ambient frame, sigma1's in coefficients w.r.t. basis_v1 columns; the
// result's bases live in the V2 frame targeted by `projection`.
AlphaDensity quotient_density(const AlphaDensity& sigma,
                              const AlphaDensity& sigma1,
                              const ShortExactPresentation& pres);

// A Lagrangian subspace L of (V1, -omega1) x (V2, omega2) presented by a
// spanning set of columns; enhancement coordinates are coefficients w.r.t.
// those columns.
struct LinearCanonicalRelation {
  MatrixXd omega1;   // 2n1 x 2n1 skew, nondegenerate
  MatrixXd omega2;   // 2n2 x 2n2
  MatrixXd basis_l;  // (2n1 + 2n2) x (n1 + n2)

  int dim1() const { return static_cast<int>(omega1.rows()); }
  int dim2() const { return static_cast<int>(omega2.rows()); }
  void validate(double tol = 1e-9) const;

  static LinearCanonicalRelation graph(const MatrixXd& omega1,
                                       const MatrixXd& omega2,
                                       const MatrixXd& map);
  static LinearCanonicalRelation identity(const MatrixXd& omega);
};

// Liouville pulled back to the graph of a symplectic map through its domain
// coordinates; on the identity graph this is the unit enhancement.
AlphaDensity graph_liouville_pull(const LinearCanonicalRelation& rel);

struct ComposedEnhancedRelation {
  LinearCanonicalRelation relation;
  AlphaDensity density;  // coordinates: columns of relation.basis_l
};

// Transverse composition of enhanced linear canonical relations
// (rel2, s2) o (rel1, s1); throws on non-transverse input.
ComposedEnhancedRelation compose_enhanced_linear(
    const LinearCanonicalRelation& rel1, const AlphaDensity& s1,
    const LinearCanonicalRelation& rel2, const AlphaDensity& s2,
    double threshold = 1e-8);

// Pointwise tangent data of the graph of a submersion f: D subset S -> S',
// in a fixed frame of T_x D (dimension = density coordinates of sigma on D).
struct GraphTangentData {
  MatrixXd df;  // dim(S') x dim(T_x D), differential in that frame
};

struct GraphCompositionResult {
  AlphaDensity density;   // on T_x D0, coordinates = columns of d0_basis
  MatrixXd d0_basis;      // dim(T_x D1) x dim(T_x D0)
};

// Composition of graph enhancements at a point: sigma2 o sigma1 evaluated on
// the fiber-product tangent space, for any choice of complement (pass one to
// verify invariance; empty means orthogonal complement).
GraphCompositionResult compose_graph_enhancements(
    const GraphTangentData& f1, const AlphaDensity& s1,
    const MatrixXd& td2_basis, const AlphaDensity& s2,
    const MatrixXd& omega_s2, const MatrixXd& complement = MatrixXd());

}  // namespace densities
}  // namespace sgalab
