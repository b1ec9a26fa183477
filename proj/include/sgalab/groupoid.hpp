#pragma once

#include "sgalab/liecase.hpp"
#include "sgalab/spray.hpp"

namespace sgalab {
namespace groupoid {

using poisson::PoissonStructure;
using poisson::StructureConfig;

struct GroupoidPoint {
  VectorXd x;
  VectorXd p;
};

constexpr double kDefaultPMax = 0.25;

enum class Backend { closed_zero, closed_constant, closed_linear, series };
Backend backend_from_string(const std::string& name);
std::string backend_name(Backend b);

struct SeriesSolveReport {
  // per order: kernel dimension of the combined linear system (0 = unique)
  std::vector<int> kernel_dims;
  double max_residual = 0.0;
  bool underdetermined = false;
};

// Coordinate generating function S(p1, p2, x): a p-series in 2n variables
// (p1 block, then p2 block) with polynomial coefficients in x. The boundary
// block is always x.(p1 + p2).
class GeneratingFunction {
 public:
  struct Jet {
    double value = 0.0;
    VectorXd dp1, dp2, dx;
    MatrixXd dp1dp1, dp2dp2, dp1dp2;  // dp1dp2(i,j) = d2S/dp1_i dp2_j
    MatrixXd dxdx;
    MatrixXd dxdp1, dxdp2;  // dxdp1(i,j) = d2S/dx_i dp1_j
  };

  GeneratingFunction() = default;
  GeneratingFunction(int n, int order, Backend backend, Series<Poly> data,
                     std::string structure_id);

  int dim() const { return n_; }
  int order() const { return order_; }
  Backend backend() const { return backend_; }
  const std::string& structure_id() const { return id_; }
  const Series<Poly>& series_data() const { return data_; }
  const SeriesSolveReport& solve_report() const { return solve_report_; }
  void set_solve_report(SeriesSolveReport r) { solve_report_ = std::move(r); }

  double value(const VectorXd& p1, const VectorXd& p2, const VectorXd& x) const;
  Jet jet(const VectorXd& p1, const VectorXd& p2, const VectorXd& x) const;

  // slice maps read off the series: s(x,p) = d_{p2} S(p, 0, x), etc.
  VectorXd source(const VectorXd& x, const VectorXd& p) const;
  VectorXd target(const VectorXd& x, const VectorXd& p) const;
  VectorXd q_slice(const VectorXd& x, const VectorXd& p) const;

  // graded coefficient block of total p-degree k
  Series<Poly> graded_block(int k) const;

 private:
  int n_ = 0;
  int order_ = 0;
  Backend backend_ = Backend::closed_zero;
  std::string id_;
  Series<Poly> data_;
  SeriesSolveReport solve_report_;
};

GeneratingFunction build_generating_function(const StructureConfig& structure,
                                             Backend backend, int order);

// --- pointwise groupoid operations over a generating function --------------

// composable-pair chart coordinates
struct PairChart {
  VectorXd p1, p2, x;
};

GroupoidPoint chart_first(const GeneratingFunction& s, const PairChart& c);
GroupoidPoint chart_second(const GeneratingFunction& s, const PairChart& c);
GroupoidPoint chart_product(const GeneratingFunction& s, const PairChart& c);

// Newton fit of the J-chart to a raw composable pair (solves for the base x)
PairChart pair_to_chart(const GeneratingFunction& s, const GroupoidPoint& g1,
                        const GroupoidPoint& g2, double tol = 1e-9);

GroupoidPoint multiply(const GeneratingFunction& s, const GroupoidPoint& g1,
                       const GroupoidPoint& g2, double p_max = kDefaultPMax);

// the two implicit argument tuples of the associativity identity
struct TripleChart {
  VectorXd p1, p2, p3, x;
  VectorXd x_bar, p_bar;      // x_bar = d_{p1}S(p_bar,p3,x), p_bar = d_x S(p1,p2,x_bar)
  VectorXd x_tilde, p_tilde;  // x_tilde = d_{p2}S(p1,p_tilde,x), p_tilde = d_x S(p2,p3,x_tilde)
};

TripleChart solve_triple_chart(const GeneratingFunction& s, const VectorXd& p1,
                               const VectorXd& p2, const VectorXd& p3,
                               const VectorXd& x);

double sga_residual(const GeneratingFunction& s, const VectorXd& p1,
                    const VectorXd& p2, const VectorXd& p3, const VectorXd& x);

using Cochain2Eval =
    std::function<complexd(const VectorXd&, const VectorXd&, const VectorXd&)>;

// |LHS - RHS| of the leading-symbol equation, with the Hessian determinant
// factors; a0 is given in the J-chart.
double a0_residual(const GeneratingFunction& s, const Cochain2Eval& a0,
                   const VectorXd& p1, const VectorXd& p2, const VectorXd& p3,
                   const VectorXd& x);

// canonical half-density factor through the spray pipeline
double gamma_s(const GeneratingFunction& s, const spray::SprayRealization& spray,
               const PairChart& chart);

struct BisectionConvolution {
  double s_value = 0.0;     // generating value of the convolved bisection
  VectorXd p_out;           // d_x S at the chart point
  complexd density_factor;  // f1(d_{p1}S) f2(d_{p2}S) a0(p1,p2,x)
};

BisectionConvolution convolve_bisections(
    const GeneratingFunction& s, const Cochain2Eval& a0, const VectorXd& p1,
    const VectorXd& p2, const std::function<complexd(const VectorXd&)>& f1,
    const std::function<complexd(const VectorXd&)>& f2, const VectorXd& x);

struct GradedBlock {
  int degree = 0;
  Series<Poly> block;  // only degree-k coefficients nonzero
};

// coefficients of S grouped by p-degree (the degree-k block carries the
// epsilon^{k-1} weight of the formal-family grading)
std::vector<GradedBlock> taylor_family(const GeneratingFunction& s, int max_order);

// --- symbolic chart series -------------------------------------------------

// x1, x2, p3-of-product and x_tilde as series in (p1, p2) with polynomial
// coefficients in x; gamma as a scalar series normalized to 1 at p = 0.
struct SymbolicPairChart {
  std::vector<Series<Poly>> x1;       // d_{p1} S
  std::vector<Series<Poly>> x2;       // d_{p2} S
  std::vector<Series<Poly>> p_prod;   // d_x S
  std::vector<Series<Poly>> x_tilde;  // s(x1, p1)
  Series<Poly> gamma;                 // canonical factor
  Series<Poly> log_gamma;
};

SymbolicPairChart build_symbolic_pair_chart(const GeneratingFunction& s,
                                            const spray::SprayRealization& spray);

// triple-chart series (p1, p2, p3 blocks) and the symbolic SGA residual
struct SymbolicTripleChart {
  std::vector<Series<Poly>> x_bar, p_bar, x_tilde, p_tilde;
  Series<Poly> sga_residual;
};

SymbolicTripleChart build_symbolic_triple_chart(const Series<Poly>& s_data,
                                                int n, int truncation);

// substitute series arguments into a 2n-variable generating-series object,
// mapping polynomial coefficients through x_args (shared by cocycle code)
Series<Poly> substitute_series(const Series<Poly>& f,
                               const std::vector<Series<Poly>>& p_args,
                               const std::vector<Series<Poly>>& x_args);

}  // namespace groupoid
}  // namespace sgalab
