#pragma once

#include <optional>
#include <string>

#include "sgalab/series.hpp"

namespace sgalab {
namespace poisson {

// Coordinate Poisson structure with polynomial coefficients: pi^{ij}(x) for
// i < j, the rest by antisymmetry.
class PoissonStructure {
 public:
  PoissonStructure() = default;
  PoissonStructure(int dim, std::string id);

  int dim() const { return dim_; }
  const std::string& id() const { return id_; }

  const Poly& upper(int i, int j) const;  // requires i < j
  void set_upper(int i, int j, Poly p);

  // pi^{ij} for arbitrary index order (antisymmetric extension)
  Poly entry(int i, int j) const;

  MatrixXd eval(const VectorXd& x) const;
  std::vector<XJetVector> eval_jet_rows(const XJetVector& x) const;  // rows i, cols j

  // max |sum_l pi^{il} d_l pi^{jk} + cyclic| over i<j<k at the point
  double jacobi_residual(const VectorXd& x) const;

  int max_poly_degree() const;

 private:
  int dim_ = 0;
  std::string id_;
  std::vector<Poly> upper_;  // row-major over i<j
  int upper_index(int i, int j) const;
};

// Lie algebra by structure constants [e^i, e^j] = c^{ij}_k e^k, with an
// optional faithful matrix representation used only by test oracles.
struct LieAlgebraData {
  int dim = 0;
  std::string id;
  std::vector<double> c;  // c[(i*dim + j)*dim + k]
  std::vector<MatrixXd> rep;

  double structure_constant(int i, int j, int k) const {
    return c[(static_cast<std::size_t>(i) * dim + j) * dim + k];
  }
  void set_structure_constant(int i, int j, int k, double value);

  // [a, b] through the structure constants
  VectorXd bracket(const VectorXd& a, const VectorXd& b) const;
  MatrixXd ad(const VectorXd& p) const;  // ad_p matrix, columns [p, e^j]

  void validate(double tol = 1e-12) const;  // antisymmetry + Jacobi
  double lie_jacobi_residual() const;
};

// pi^{ij}(x) = sign * c^{ij}_k x^k; the default sign follows the convention
// that makes the spray multiplication match the coadjoint action groupoid.
PoissonStructure lie_to_poisson(const LieAlgebraData& lie, double sign = -1.0);

// builtin structures
PoissonStructure zero_structure(int dim);
PoissonStructure constant_symplectic2();
PoissonStructure quadratic_demo();
LieAlgebraData so3();
LieAlgebraData sl2();
LieAlgebraData heisenberg3();
LieAlgebraData aff1();
LieAlgebraData abelian2();

// Structured-text config: {"dim": n, "pi": [{"i":., "j":., "terms": [...]}]}
// or {"lie": {"dim": n, "c": [[i,j,k,value], ...], "rep": [...] }}.
struct StructureConfig {
  std::optional<PoissonStructure> pi;
  std::optional<LieAlgebraData> lie;

  const std::string& id() const;
  // Poisson structure in either case (linear one for a Lie algebra).
  PoissonStructure poisson() const;
};

StructureConfig parse_structure_json(const std::string& text);
StructureConfig builtin_structure(const std::string& name);

}  // namespace poisson
}  // namespace sgalab
