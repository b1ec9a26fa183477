#include "sgalab/jets.hpp"

namespace sgalab {

XJetScalar jet_compose(const XJetScalar& f, const XJetVector& args) {
  const int m = f.dim();                         // inner dimension
  const int n = args.empty() ? 0 : args[0].dim(); // outer dimension
  if (static_cast<int>(args.size()) != m)
    throw invalid_input("jet_compose: argument count mismatch");
  XJetScalar r(n);
  r.value = f.value;
  for (int i = 0; i < m; ++i) {
    r.grad += f.grad(i) * args[i].grad;
    r.hess += f.grad(i) * args[i].hess;
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      r.hess += f.hess(i, j) * (args[i].grad * args[j].grad.transpose());
  return r;
}

XJetVector jet_inverse(const XJetVector& f, const VectorXd& z_star) {
  const int n = static_cast<int>(f.size());
  MatrixXd jac(n, n);
  for (int i = 0; i < n; ++i) jac.row(i) = f[i].grad.transpose();
  Eigen::PartialPivLU<MatrixXd> lu(jac);
  const MatrixXd b = lu.inverse();  // dG/dy = (dF/dz)^{-1}

  XJetVector g(n, XJetScalar(n));
  for (int k = 0; k < n; ++k) {
    g[k].value = z_star(k);
    g[k].grad = b.row(k).transpose();
  }
  // second derivatives: d2G_k = -sum_i B_{ki} * B^T d2F_i B
  for (int k = 0; k < n; ++k) {
    MatrixXd h = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) h += b(k, i) * (b.transpose() * f[i].hess * b);
    g[k].hess = -h;
  }
  return g;
}

}  // namespace sgalab
