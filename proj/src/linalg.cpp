#include "sgalab/linalg.hpp"

#include <cmath>

namespace sgalab {

LsqResult solve_least_squares(const MatrixXd& a, const VectorXd& b,
                              double threshold) {
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * threshold : 0.0;
  LsqResult out;
  VectorXd inv = VectorXd::Zero(sv.size());
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) {
      inv(i) = 1.0 / sv(i);
      ++out.rank;
    }
  }
  out.kernel_dim = static_cast<int>(a.cols()) - out.rank;
  out.solution = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose() * b;
  out.residual = (a * out.solution - b).norm();
  return out;
}

MatrixXd nullspace(const MatrixXd& a, double threshold) {
  if (a.rows() == 0) return MatrixXd::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  const VectorXd& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * threshold : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

double condition_gap(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  const VectorXd& sv = svd.singularValues();
  if (sv(0) == 0.0) return 0.0;
  return sv(sv.size() - 1) / sv(0);
}

double operator_norm(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  return svd.singularValues()(0);
}

MatrixXd expm(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  MatrixXd scaled = a;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    scaled /= std::pow(2.0, squarings);
  }
  MatrixXd term = MatrixXd::Identity(n, n);
  MatrixXd sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

MatrixXd logm_near_identity(const MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const MatrixXd x = a - MatrixXd::Identity(n, n);
  if (operator_norm(x) >= 0.9)
    throw invalid_input("logm: matrix too far from identity");
  MatrixXd power = x;
  MatrixXd sum = MatrixXd::Zero(n, n);
  for (int k = 1; k <= 120; ++k) {
    sum += power * ((k % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(k));
    power = power * x;
  }
  return sum;
}

MatrixXd expm_derivative(const MatrixXd& a, const MatrixXd& da) {
  const int n = static_cast<int>(a.rows());
  MatrixXd block = MatrixXd::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = a;
  block.bottomRightCorner(n, n) = a;
  block.topRightCorner(n, n) = da;
  return expm(block).topRightCorner(n, n);
}

namespace {

// sum_k c_k a^k with c supplied for k = 0..order
MatrixXd taylor_apply(const MatrixXd& a, const std::vector<double>& c) {
  const int n = static_cast<int>(a.rows());
  MatrixXd power = MatrixXd::Identity(n, n);
  MatrixXd sum = MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] != 0.0) sum += c[k] * power;
    if (k + 1 < c.size()) power = power * a;
  }
  return sum;
}

}  // namespace

MatrixXd sinhc_half(const MatrixXd& a) {
  // sinh(z/2)/(z/2) = sum_m (z/2)^{2m} / (2m+1)!
  std::vector<double> c(21, 0.0);
  double fact = 1.0;  // (2m+1)!
  double pow4 = 1.0;  // 4^{-m} absorbed into the coefficient of z^{2m}
  for (int m = 0; 2 * m <= 20; ++m) {
    c[2 * m] = pow4 / fact;
    pow4 /= 4.0;
    fact *= (2.0 * m + 2.0) * (2.0 * m + 3.0);
  }
  return taylor_apply(a, c);
}

MatrixXd exp_ratio_neg(const MatrixXd& a) {
  // (1 - e^{-z})/z = sum_k (-1)^k z^k / (k+1)!
  std::vector<double> c(21, 0.0);
  double fact = 1.0;
  for (int k = 0; k <= 20; ++k) {
    fact *= (k + 1);
    c[k] = (k % 2 == 0 ? 1.0 : -1.0) / fact;
  }
  return taylor_apply(a, c);
}

MatrixXd exp_ratio_pos(const MatrixXd& a) {
  // (e^{z} - 1)/z = sum_k z^k / (k+1)!
  std::vector<double> c(21, 0.0);
  double fact = 1.0;
  for (int k = 0; k <= 20; ++k) {
    fact *= (k + 1);
    c[k] = 1.0 / fact;
  }
  return taylor_apply(a, c);
}

}  // namespace sgalab
