#include "sgalab/densities.hpp"

#include <cmath>

namespace sgalab {
namespace densities {

complexd AlphaDensity::eval(const MatrixXd& basis) const {
  if (basis.rows() != dim || basis.cols() != dim)
    throw invalid_input("AlphaDensity: basis has wrong shape");
  Eigen::PartialPivLU<MatrixXd> lu(ref_basis);
  const MatrixXd rel = lu.solve(basis);
  const double det = rel.determinant();
  if (!(std::abs(det) > 1e-13))
    throw invalid_input("degenerate basis");
  return ref_value * std::pow(std::abs(det), order);
}

AlphaDensity liouville_half_density(const MatrixXd& omega) {
  const int d = static_cast<int>(omega.rows());
  if (d % 2 != 0 || omega.cols() != d)
    throw invalid_input("liouville: omega must be even-dimensional square");
  const double det = omega.determinant();
  if (!(std::abs(det) > 1e-13))
    throw invalid_input("liouville: degenerate symplectic form");
  return AlphaDensity::on_identity_basis(0.5, d, std::pow(std::abs(det), 0.25));
}

void ShortExactPresentation::validate() const {
  const int n1 = static_cast<int>(basis_v1.cols());
  const int n2 = static_cast<int>(complement.cols());
  if (n1 + n2 != ambient_dim)
    throw invalid_input("presentation: dimensions do not add up");
  MatrixXd joint(ambient_dim, ambient_dim);
  joint << basis_v1, complement;
  if (std::abs(joint.determinant()) < 1e-12)
    throw invalid_input("presentation: basis_v1 and complement do not span");
  if ((projection * basis_v1).cwiseAbs().maxCoeff() > 1e-10)
    throw invalid_input("presentation: projection does not kill V1");
}

AlphaDensity quotient_density(const AlphaDensity& sigma,
                              const AlphaDensity& sigma1,
                              const ShortExactPresentation& pres) {
  pres.validate();
  if (sigma.order != sigma1.order)
    throw invalid_input("quotient: orders differ");
  const complexd denom = sigma1.eval(MatrixXd::Identity(sigma1.dim, sigma1.dim));
  if (std::abs(denom) < 1e-300)
    throw invalid_input("division by vanishing density");
  MatrixXd joint(pres.ambient_dim, pres.ambient_dim);
  joint << pres.basis_v1, pres.complement;
  const complexd total = sigma.eval(joint);
  const int n2 = static_cast<int>(pres.complement.cols());
  AlphaDensity out;
  out.order = sigma.order;
  out.dim = n2;
  out.ref_value = total / denom;
  out.ref_basis = pres.projection * pres.complement;
  return out;
}

void LinearCanonicalRelation::validate(double tol) const {
  const int d1 = dim1(), d2 = dim2();
  const int k = (d1 + d2) / 2;
  if (basis_l.rows() != d1 + d2 || basis_l.cols() != k)
    throw invalid_input("relation: basis_l has wrong shape");
  if (condition_gap(basis_l) < 1e-10)
    throw invalid_input("relation: basis columns are dependent");
  // isotropy for (-omega1) + omega2
  MatrixXd big = MatrixXd::Zero(d1 + d2, d1 + d2);
  big.topLeftCorner(d1, d1) = -omega1;
  big.bottomRightCorner(d2, d2) = omega2;
  const MatrixXd gram = basis_l.transpose() * big * basis_l;
  if (gram.cwiseAbs().maxCoeff() > tol)
    throw invalid_input("relation: subspace is not isotropic");
}

LinearCanonicalRelation LinearCanonicalRelation::graph(const MatrixXd& omega1,
                                                       const MatrixXd& omega2,
                                                       const MatrixXd& map) {
  const int d1 = static_cast<int>(omega1.rows());
  const int d2 = static_cast<int>(omega2.rows());
  LinearCanonicalRelation rel;
  rel.omega1 = omega1;
  rel.omega2 = omega2;
  rel.basis_l = MatrixXd::Zero(d1 + d2, d1);
  rel.basis_l.topRows(d1) = MatrixXd::Identity(d1, d1);
  rel.basis_l.bottomRows(d2) = map;
  rel.validate();
  return rel;
}

LinearCanonicalRelation LinearCanonicalRelation::identity(const MatrixXd& omega) {
  return graph(omega, omega, MatrixXd::Identity(omega.rows(), omega.cols()));
}

AlphaDensity graph_liouville_pull(const LinearCanonicalRelation& rel) {
  const AlphaDensity lambda = liouville_half_density(rel.omega1);
  const int k = static_cast<int>(rel.basis_l.cols());
  // graph coordinates are domain coordinates; value on the coefficient
  // identity equals the Liouville value on the projected domain basis
  const MatrixXd domain = rel.basis_l.topRows(rel.dim1());
  return AlphaDensity::on_identity_basis(0.5, k, lambda.eval(domain));
}

ComposedEnhancedRelation compose_enhanced_linear(
    const LinearCanonicalRelation& rel1, const AlphaDensity& s1,
    const LinearCanonicalRelation& rel2, const AlphaDensity& s2,
    double threshold) {
  const int d1 = rel1.dim1();
  const int d2 = rel1.dim2();
  if (rel2.dim1() != d2)
    throw invalid_input("compose: middle dimensions disagree");
  const int d3 = rel2.dim2();
  const int k1 = static_cast<int>(rel1.basis_l.cols());
  const int k2 = static_cast<int>(rel2.basis_l.cols());

  // middle components; the fiber product lives in (a, b) coefficients
  const MatrixXd m1 = rel1.basis_l.bottomRows(d2);
  const MatrixXd m2 = rel2.basis_l.topRows(d2);
  MatrixXd stacked(d2, k1 + k2);
  stacked << m1, -m2;

  if (condition_gap(stacked.transpose()) < threshold)
    throw domain_error("non-transverse composition (clean case unsupported)");
  const MatrixXd fiber = nullspace(stacked);  // (k1 + k2) x r, orthonormal
  const int r = static_cast<int>(fiber.cols());
  if (r != (d1 + d3) / 2)
    throw domain_error("non-transverse composition (clean case unsupported)");

  // alpha maps fiber-product coefficients to (v1, v3)
  MatrixXd alpha_map = MatrixXd::Zero(d1 + d3, k1 + k2);
  alpha_map.topLeftCorner(d1, k1) = rel1.basis_l.topRows(d1);
  alpha_map.bottomRightCorner(d3, k2) = rel2.basis_l.bottomRows(d3);
  const MatrixXd composed_basis = alpha_map * fiber;
  if (condition_gap(composed_basis) < threshold)
    throw domain_error("non-transverse composition (clean case unsupported)");

  // complement with tau-image a basis of V2; the orthogonal complement of the
  // fiber product always works since tau is injective there
  const MatrixXd comp = nullspace(fiber.transpose());
  const MatrixXd tau_comp = stacked * comp;  // d2 x d2

  // (s1 x s2) on the combined basis over the block-diagonal reference
  MatrixXd prod_ref = MatrixXd::Zero(k1 + k2, k1 + k2);
  prod_ref.topLeftCorner(k1, k1) = s1.ref_basis;
  prod_ref.bottomRightCorner(k2, k2) = s2.ref_basis;
  AlphaDensity product(s1.order, k1 + k2, s1.ref_value * s2.ref_value, prod_ref);
  MatrixXd combined(k1 + k2, k1 + k2);
  combined << fiber, comp;
  const complexd numerator = product.eval(combined);

  const complexd denominator = liouville_half_density(rel2.omega1).eval(tau_comp);

  ComposedEnhancedRelation out;
  out.relation.omega1 = rel1.omega1;
  out.relation.omega2 = rel2.omega2;
  out.relation.basis_l = composed_basis;
  out.density = AlphaDensity::on_identity_basis(s1.order, r, numerator / denominator);
  return out;
}

GraphCompositionResult compose_graph_enhancements(
    const GraphTangentData& f1, const AlphaDensity& s1,
    const MatrixXd& td2_basis, const AlphaDensity& s2,
    const MatrixXd& omega_s2, const MatrixXd& complement) {
  const int d1 = static_cast<int>(f1.df.cols());
  const int amb2 = static_cast<int>(f1.df.rows());
  const int d2 = static_cast<int>(td2_basis.cols());
  if (td2_basis.rows() != amb2)
    throw invalid_input("graph composition: ambient dimensions disagree");

  // D0 = (Df1)^{-1}(span TD2), from the joint nullspace
  MatrixXd joint(amb2, d1 + d2);
  joint << f1.df, -td2_basis;
  const MatrixXd null = nullspace(joint);
  const int r = static_cast<int>(null.cols());
  if (r != d1 - (amb2 - d2))
    throw domain_error("graph composition: map not transverse to target");
  const MatrixXd d0 = null.topRows(d1);
  if (condition_gap(d0) < 1e-10)
    throw domain_error("graph composition: map not transverse to target");

  MatrixXd comp = complement;
  if (comp.size() == 0) comp = nullspace(d0.transpose());
  if (comp.rows() != d1 || comp.cols() != d1 - r)
    throw invalid_input("graph composition: complement has wrong shape");

  MatrixXd d1_basis(d1, d1);
  d1_basis << d0, comp;
  if (std::abs(d1_basis.determinant()) < 1e-12)
    throw invalid_input("graph composition: complement does not complement");

  MatrixXd lambda_arg(amb2, amb2);
  lambda_arg << td2_basis, f1.df * comp;

  const complexd value = s2.eval(MatrixXd::Identity(d2, d2)) * s1.eval(d1_basis) /
                         liouville_half_density(omega_s2).eval(lambda_arg);
  GraphCompositionResult out;
  out.density = AlphaDensity::on_identity_basis(0.5, r, value);
  out.d0_basis = d0;
  return out;
}

}  // namespace densities
}  // namespace sgalab
