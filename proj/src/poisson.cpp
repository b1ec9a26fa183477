#include "sgalab/poisson.hpp"

#include <json.hpp>

namespace sgalab {
namespace poisson {

PoissonStructure::PoissonStructure(int dim, std::string id)
    : dim_(dim), id_(std::move(id)) {
  upper_.assign(static_cast<std::size_t>(dim) * (dim - 1) / 2, Poly(dim));
}

int PoissonStructure::upper_index(int i, int j) const {
  if (!(0 <= i && i < j && j < dim_))
    throw invalid_input("PoissonStructure: need 0 <= i < j < dim");
  // offset of row i in the packed strictly-upper triangle
  return i * dim_ - i * (i + 1) / 2 + (j - i - 1);
}

const Poly& PoissonStructure::upper(int i, int j) const {
  return upper_[upper_index(i, j)];
}

void PoissonStructure::set_upper(int i, int j, Poly p) {
  if (p.nvars() != dim_) throw invalid_input("PoissonStructure: poly nvars mismatch");
  upper_[upper_index(i, j)] = std::move(p);
}

Poly PoissonStructure::entry(int i, int j) const {
  if (i == j) return Poly(dim_);
  if (i < j) return upper(i, j);
  return -upper(j, i);
}

MatrixXd PoissonStructure::eval(const VectorXd& x) const {
  MatrixXd m = MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j) {
      const double v = upper(i, j).eval(x);
      m(i, j) = v;
      m(j, i) = -v;
    }
  return m;
}

std::vector<XJetVector> PoissonStructure::eval_jet_rows(const XJetVector& x) const {
  const int n = dim_;
  std::vector<XJetVector> rows(n, XJetVector(n, XJetScalar(x[0].dim())));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const XJetScalar v = upper(i, j).eval_jet(x);
      rows[i][j] = v;
      rows[j][i] = -v;
    }
  return rows;
}

double PoissonStructure::jacobi_residual(const VectorXd& x) const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int k = j + 1; k < dim_; ++k) {
        double acc = 0.0;
        for (int l = 0; l < dim_; ++l) {
          acc += entry(i, l).eval(x) * entry(j, k).derivative(l).eval(x);
          acc += entry(j, l).eval(x) * entry(k, i).derivative(l).eval(x);
          acc += entry(k, l).eval(x) * entry(i, j).derivative(l).eval(x);
        }
        worst = std::max(worst, std::abs(acc));
      }
  return worst;
}

int PoissonStructure::max_poly_degree() const {
  int d = 0;
  for (const auto& p : upper_) d = std::max(d, p.degree());
  return d;
}

void LieAlgebraData::set_structure_constant(int i, int j, int k, double value) {
  c[(static_cast<std::size_t>(i) * dim + j) * dim + k] = value;
  c[(static_cast<std::size_t>(j) * dim + i) * dim + k] = -value;
}

VectorXd LieAlgebraData::bracket(const VectorXd& a, const VectorXd& b) const {
  VectorXd r = VectorXd::Zero(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const double ab = a(i) * b(j);
      if (ab == 0.0) continue;
      for (int k = 0; k < dim; ++k) r(k) += ab * structure_constant(i, j, k);
    }
  return r;
}

MatrixXd LieAlgebraData::ad(const VectorXd& p) const {
  MatrixXd m = MatrixXd::Zero(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) {
      double acc = 0.0;
      for (int i = 0; i < dim; ++i) acc += p(i) * structure_constant(i, j, k);
      m(k, j) = acc;
    }
  return m;
}

double LieAlgebraData::lie_jacobi_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int m = 0; m < dim; ++m) {
          double acc = 0.0;
          for (int l = 0; l < dim; ++l) {
            acc += structure_constant(i, j, l) * structure_constant(l, k, m);
            acc += structure_constant(j, k, l) * structure_constant(l, i, m);
            acc += structure_constant(k, i, l) * structure_constant(l, j, m);
          }
          worst = std::max(worst, std::abs(acc));
        }
  return worst;
}

void LieAlgebraData::validate(double tol) const {
  if (static_cast<int>(c.size()) != dim * dim * dim)
    throw invalid_input("LieAlgebraData: structure constant table has wrong size");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        if (std::abs(structure_constant(i, j, k) + structure_constant(j, i, k)) > tol)
          throw invalid_input("LieAlgebraData: constants are not antisymmetric");
  if (lie_jacobi_residual() > tol)
    throw invalid_input("LieAlgebraData: Jacobi identity fails");
  for (const auto& m : rep)
    if (m.rows() != m.cols()) throw invalid_input("LieAlgebraData: rep not square");
}

PoissonStructure lie_to_poisson(const LieAlgebraData& lie, double sign) {
  PoissonStructure pi(lie.dim, lie.id);
  for (int i = 0; i < lie.dim; ++i)
    for (int j = i + 1; j < lie.dim; ++j) {
      Poly p(lie.dim);
      for (int k = 0; k < lie.dim; ++k) {
        const double ck = lie.structure_constant(i, j, k);
        if (ck != 0.0) p += Poly::variable(k, lie.dim) * (sign * ck);
      }
      pi.set_upper(i, j, p);
    }
  return pi;
}

PoissonStructure zero_structure(int dim) {
  return PoissonStructure(dim, "zero" + std::to_string(dim));
}

PoissonStructure constant_symplectic2() {
  PoissonStructure pi(2, "constant2");
  pi.set_upper(0, 1, Poly(2, 1.0));
  return pi;
}

PoissonStructure quadratic_demo() {
  // any pi^{01}(x) is Poisson in two dimensions; a nonconstant quadratic one
  PoissonStructure pi(2, "quadratic2");
  Poly p(2, 1.0);
  p += Poly::monomial({2, 0}, 0.5, 2);
  p += Poly::monomial({0, 2}, 0.25, 2);
  pi.set_upper(0, 1, p);
  return pi;
}

namespace {

LieAlgebraData make_lie(int dim, std::string id) {
  LieAlgebraData lie;
  lie.dim = dim;
  lie.id = std::move(id);
  lie.c.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  return lie;
}

}  // namespace

LieAlgebraData so3() {
  LieAlgebraData lie = make_lie(3, "so3");
  lie.set_structure_constant(0, 1, 2, 1.0);
  lie.set_structure_constant(1, 2, 0, 1.0);
  lie.set_structure_constant(2, 0, 1, 1.0);
  // defining representation: e^i -> L_i with (L_i)_{jk} = -eps_{ijk}
  for (int i = 0; i < 3; ++i) {
    MatrixXd m = MatrixXd::Zero(3, 3);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int eps = (i - j) * (j - k) * (k - i) / 2;  // Levi-Civita on {0,1,2}
        m(j, k) = -static_cast<double>(eps);
      }
    lie.rep.push_back(m);
  }
  lie.validate();
  return lie;
}

LieAlgebraData sl2() {
  // basis (H, E, F): [H,E] = 2E, [H,F] = -2F, [E,F] = H
  LieAlgebraData lie = make_lie(3, "sl2");
  lie.set_structure_constant(0, 1, 1, 2.0);
  lie.set_structure_constant(0, 2, 2, -2.0);
  lie.set_structure_constant(1, 2, 0, 1.0);
  MatrixXd h(2, 2), e(2, 2), f(2, 2);
  h << 1, 0, 0, -1;
  e << 0, 1, 0, 0;
  f << 0, 0, 1, 0;
  lie.rep = {h, e, f};
  lie.validate();
  return lie;
}

LieAlgebraData heisenberg3() {
  // [X,Y] = Z, Z central; the adjoint representation is unfaithful here
  LieAlgebraData lie = make_lie(3, "h3");
  lie.set_structure_constant(0, 1, 2, 1.0);
  MatrixXd x = MatrixXd::Zero(3, 3), y = MatrixXd::Zero(3, 3), z = MatrixXd::Zero(3, 3);
  x(0, 1) = 1.0;
  y(1, 2) = 1.0;
  z(0, 2) = 1.0;
  lie.rep = {x, y, z};
  lie.validate();
  return lie;
}

LieAlgebraData aff1() {
  // [A,B] = B
  LieAlgebraData lie = make_lie(2, "aff1");
  lie.set_structure_constant(0, 1, 1, 1.0);
  MatrixXd a(2, 2), b(2, 2);
  a << 1, 0, 0, 0;
  b << 0, 1, 0, 0;
  lie.rep = {a, b};
  lie.validate();
  return lie;
}

LieAlgebraData abelian2() {
  LieAlgebraData lie = make_lie(2, "abelian2");
  lie.validate();
  return lie;
}

const std::string& StructureConfig::id() const {
  static const std::string empty;
  if (pi) return pi->id();
  if (lie) return lie->id;
  return empty;
}

PoissonStructure StructureConfig::poisson() const {
  if (pi) return *pi;
  if (lie) return lie_to_poisson(*lie);
  throw invalid_input("StructureConfig: empty");
}

StructureConfig parse_structure_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw invalid_input(std::string("config parse error: ") + e.what());
  }
  StructureConfig out;
  if (j.contains("lie")) {
    const auto& lj = j["lie"];
    LieAlgebraData lie = make_lie(lj.at("dim").get<int>(),
                                  lj.value("id", std::string("lie")));
    for (const auto& row : lj.at("c")) {
      if (!row.is_array() || row.size() != 4)
        throw invalid_input("config: lie.c entries must be [i,j,k,value]");
      lie.set_structure_constant(row[0].get<int>(), row[1].get<int>(),
                                 row[2].get<int>(), row[3].get<double>());
    }
    if (lj.contains("rep")) {
      for (const auto& mat : lj["rep"]) {
        const int rows = static_cast<int>(mat.size());
        MatrixXd m(rows, rows);
        for (int r = 0; r < rows; ++r)
          for (int cidx = 0; cidx < rows; ++cidx)
            m(r, cidx) = mat[r][cidx].get<double>();
        lie.rep.push_back(m);
      }
    }
    lie.validate(1e-10);
    out.lie = std::move(lie);
    return out;
  }
  const int dim = j.at("dim").get<int>();
  PoissonStructure pi(dim, j.value("id", std::string("pi")));
  for (const auto& block : j.at("pi")) {
    const int i = block.at("i").get<int>();
    const int jj = block.at("j").get<int>();
    Poly p(dim);
    for (const auto& term : block.at("terms")) {
      std::vector<int> exps = term.at("exps").get<std::vector<int>>();
      p.add_term(exps, term.at("c").get<double>());
    }
    pi.set_upper(i, jj, std::move(p));
  }
  out.pi = std::move(pi);
  return out;
}

StructureConfig builtin_structure(const std::string& name) {
  StructureConfig out;
  if (name == "zero" || name == "zero2") out.pi = zero_structure(2);
  else if (name == "zero3") out.pi = zero_structure(3);
  else if (name == "constant") out.pi = constant_symplectic2();
  else if (name == "quadratic") out.pi = quadratic_demo();
  else if (name == "so3") out.lie = so3();
  else if (name == "sl2") out.lie = sl2();
  else if (name == "h3") out.lie = heisenberg3();
  else if (name == "aff1") out.lie = aff1();
  else if (name == "abelian2") out.lie = abelian2();
  else throw invalid_input("unknown builtin structure: " + name);
  return out;
}

}  // namespace poisson
}  // namespace sgalab
