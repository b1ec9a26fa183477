#include "sgalab/groupoid.hpp"

#include <cmath>

namespace sgalab {
namespace groupoid {

Backend backend_from_string(const std::string& name) {
  if (name == "closed_zero" || name == "zero") return Backend::closed_zero;
  if (name == "closed_constant" || name == "constant") return Backend::closed_constant;
  if (name == "closed_linear" || name == "linear") return Backend::closed_linear;
  if (name == "series") return Backend::series;
  throw invalid_input("unknown backend: " + name);
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::closed_zero: return "closed_zero";
    case Backend::closed_constant: return "closed_constant";
    case Backend::closed_linear: return "closed_linear";
    case Backend::series: return "series";
  }
  return "?";
}

GeneratingFunction::GeneratingFunction(int n, int order, Backend backend,
                                       Series<Poly> data, std::string structure_id)
    : n_(n), order_(order), backend_(backend), id_(std::move(structure_id)),
      data_(std::move(data)) {}

namespace {

// power table p_v^k for all series variables
std::vector<std::vector<double>> power_table(const VectorXd& p1, const VectorXd& p2,
                                             int order) {
  const int n = static_cast<int>(p1.size());
  std::vector<std::vector<double>> pow(2 * n, std::vector<double>(order + 2, 1.0));
  for (int v = 0; v < 2 * n; ++v) {
    const double val = v < n ? p1(v) : p2(v - n);
    for (int k = 1; k <= order + 1; ++k) pow[v][k] = pow[v][k - 1] * val;
  }
  return pow;
}

}  // namespace

double GeneratingFunction::value(const VectorXd& p1, const VectorXd& p2,
                                 const VectorXd& x) const {
  const IndexTable& t = data_.table();
  const auto pow = power_table(p1, p2, order_);
  double acc = 0.0;
  for (int i = 0; i < t.size(); ++i) {
    const Poly& c = data_.coeff_at(i);
    if (c.is_zero()) continue;
    double mono = 1.0;
    for (int v = 0; v < 2 * n_; ++v) mono *= pow[v][t.exps[i][v]];
    if (mono != 0.0) acc += c.eval(x) * mono;
  }
  return acc;
}

GeneratingFunction::Jet GeneratingFunction::jet(const VectorXd& p1,
                                                const VectorXd& p2,
                                                const VectorXd& x) const {
  const int n = n_;
  Jet out;
  out.dp1 = VectorXd::Zero(n);
  out.dp2 = VectorXd::Zero(n);
  out.dx = VectorXd::Zero(n);
  out.dp1dp1 = MatrixXd::Zero(n, n);
  out.dp2dp2 = MatrixXd::Zero(n, n);
  out.dp1dp2 = MatrixXd::Zero(n, n);
  out.dxdx = MatrixXd::Zero(n, n);
  out.dxdp1 = MatrixXd::Zero(n, n);
  out.dxdp2 = MatrixXd::Zero(n, n);

  const IndexTable& t = data_.table();
  const auto pow = power_table(p1, p2, order_);
  XJetVector seed;
  seed.reserve(n);
  for (int i = 0; i < n; ++i) seed.push_back(XJetScalar::variable(x(i), i, n));

  std::vector<int> active;
  for (int i = 0; i < t.size(); ++i) {
    const Poly& c = data_.coeff_at(i);
    if (c.is_zero()) continue;
    const auto& e = t.exps[i];
    active.clear();
    double mono = 1.0;
    for (int v = 0; v < 2 * n; ++v) {
      if (e[v] > 0) active.push_back(v);
      mono *= pow[v][e[v]];
    }
    // first and second derivatives of the monomial in the p-variables
    VectorXd dmono = VectorXd::Zero(2 * n);
    MatrixXd ddmono = MatrixXd::Zero(2 * n, 2 * n);
    for (int ai = 0; ai < static_cast<int>(active.size()); ++ai) {
      const int v = active[ai];
      double dv = static_cast<double>(e[v]) * pow[v][e[v] - 1];
      for (int bi = 0; bi < static_cast<int>(active.size()); ++bi) {
        if (bi == ai) continue;
        dv *= pow[active[bi]][e[active[bi]]];
      }
      dmono(v) = dv;
      if (e[v] >= 2) {
        double dvv = static_cast<double>(e[v]) * (e[v] - 1) * pow[v][e[v] - 2];
        for (int bi = 0; bi < static_cast<int>(active.size()); ++bi) {
          if (bi == ai) continue;
          dvv *= pow[active[bi]][e[active[bi]]];
        }
        ddmono(v, v) = dvv;
      }
      for (int bi = ai + 1; bi < static_cast<int>(active.size()); ++bi) {
        const int w = active[bi];
        double dvw = static_cast<double>(e[v]) * pow[v][e[v] - 1] *
                     static_cast<double>(e[w]) * pow[w][e[w] - 1];
        for (int ci = 0; ci < static_cast<int>(active.size()); ++ci) {
          if (ci == ai || ci == bi) continue;
          dvw *= pow[active[ci]][e[active[ci]]];
        }
        ddmono(v, w) = dvw;
        ddmono(w, v) = dvw;
      }
    }

    const XJetScalar cj = c.eval_jet(seed);
    if (mono != 0.0) {
      out.value += cj.value * mono;
      out.dx += cj.grad * mono;
      out.dxdx += cj.hess * mono;
    }
    for (int v = 0; v < 2 * n; ++v) {
      if (dmono(v) == 0.0) continue;
      if (v < n) {
        out.dp1(v) += cj.value * dmono(v);
        out.dxdp1.col(v) += cj.grad * dmono(v);
      } else {
        out.dp2(v - n) += cj.value * dmono(v);
        out.dxdp2.col(v - n) += cj.grad * dmono(v);
      }
      for (int w = 0; w < 2 * n; ++w) {
        if (ddmono(v, w) == 0.0 || w < v) continue;
        const double term = cj.value * ddmono(v, w);
        const bool v1 = v < n, w1 = w < n;
        if (v1 && w1) {
          out.dp1dp1(v, w) += term;
          if (v != w) out.dp1dp1(w, v) += term;
        } else if (!v1 && !w1) {
          out.dp2dp2(v - n, w - n) += term;
          if (v != w) out.dp2dp2(w - n, v - n) += term;
        } else {
          out.dp1dp2(v, w - n) += term;  // v in block 1, w in block 2
        }
      }
    }
  }
  return out;
}

VectorXd GeneratingFunction::source(const VectorXd& x, const VectorXd& p) const {
  const Jet j = jet(p, VectorXd::Zero(n_), x);
  return j.dp2;
}

VectorXd GeneratingFunction::target(const VectorXd& x, const VectorXd& p) const {
  const Jet j = jet(VectorXd::Zero(n_), p, x);
  return j.dp1;
}

VectorXd GeneratingFunction::q_slice(const VectorXd& x, const VectorXd& p) const {
  const Jet j = jet(-p, p, x);
  return j.dp2;
}

Series<Poly> GeneratingFunction::graded_block(int k) const {
  return data_.graded_part(k);
}

namespace {

Series<Poly> boundary_series(int n, int order) {
  Series<Poly> s(2 * n, order, Poly(n));
  std::vector<int> e(2 * n, 0);
  for (int i = 0; i < n; ++i) {
    e[i] = 1;
    s.set_coeff(e, Poly::variable(i, n));
    e[i] = 0;
    e[n + i] = 1;
    s.set_coeff(e, Poly::variable(i, n));
    e[n + i] = 0;
  }
  return s;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

// product of per-variable binomials C(a_v, b_v) for b <= a
double multinom(const IndexTable::Exps& a, const IndexTable::Exps& b, int nvars) {
  double r = 1.0;
  for (int v = 0; v < nvars; ++v) r *= binom(a[v], b[v]);
  return r;
}

// enumerate sub-exponents b <= a
void sub_exponents(const IndexTable::Exps& a, int nvars,
                   const std::function<void(const IndexTable::Exps&)>& fn) {
  IndexTable::Exps b{};
  std::function<void(int)> rec = [&](int v) {
    if (v == nvars) {
      fn(b);
      return;
    }
    for (int e = 0; e <= a[v]; ++e) {
      b[v] = static_cast<std::uint8_t>(e);
      rec(v + 1);
      b[v] = 0;
    }
  };
  rec(0);
}

struct SliceRow {
  std::map<int, double> entries;  // unknown column -> coefficient
  // right-hand sides per x-monomial key are attached separately
};

GeneratingFunction solve_series_backend(const StructureConfig& structure,
                                        int order) {
  const PoissonStructure pi = structure.poisson();
  const int n = pi.dim();
  if (3 * n > kMaxSeriesVars)
    throw invalid_input("series backend: dimension too large for the chart ring");

  spray::SprayRealization spray(pi, order);
  Series<Poly> s_data = boundary_series(n, order);
  SeriesSolveReport report;

  const IndexTable& t2 = s_data.table();  // 2n-variable table

  for (int k = 2; k <= order; ++k) {
    // unknown monomials at this order: p1 and p2 degrees both >= 1
    std::vector<int> unknowns;
    for (int idx = t2.degree_start[k]; idx < t2.degree_start[k + 1]; ++idx) {
      int da = 0, db = 0;
      for (int v = 0; v < n; ++v) da += t2.exps[idx][v];
      for (int v = 0; v < n; ++v) db += t2.exps[idx][n + v];
      if (da >= 1 && db >= 1) unknowns.push_back(idx);
    }
    std::map<int, int> column_of;
    for (std::size_t c = 0; c < unknowns.size(); ++c)
      column_of[unknowns[c]] = static_cast<int>(c);
    const int ncols = static_cast<int>(unknowns.size());
    if (ncols == 0) continue;

    // --- linearized associativity block (independent of the x-monomial)
    const IndexTable& t3 = IndexTable::get(3 * n, k);
    const int sga_rows = t3.degree_start[k + 1] - t3.degree_start[k];
    const int row0_sga = 0;
    auto row_of_t3 = [&](const IndexTable::Exps& e) {
      const int pos = t3.position(e);
      return pos - t3.degree_start[k];
    };

    // slice rows: q-slice, s-slice, t-slice
    const IndexTable& t1 = IndexTable::get(n, order);
    std::vector<SliceRow> slice_rows;

    struct RhsSpec {
      int kind;        // 0 = q slice, 1 = s slice, 2 = t slice
      int component;   // j
      int t1_index;    // monomial in the n-variable table
      double sign;     // applied to the source coefficient
    };
    std::vector<RhsSpec> rhs_specs;

    // q-slice: sum over a+b = mu+e_j, b_j >= 1 of (-1)^{|a|} b_j c_{ab}
    for (int j = 0; j < n; ++j) {
      for (int mu = t1.degree_start[k - 1]; mu < t1.degree_start[k]; ++mu) {
        SliceRow row;
        IndexTable::Exps target = t1.exps[mu];
        target[j] += 1;
        // enumerate a <= target with b = target - a
        sub_exponents(target, n, [&](const IndexTable::Exps& a) {
          IndexTable::Exps b{};
          int abs_a = 0, abs_b = 0;
          for (int w = 0; w < n; ++w) {
            b[w] = static_cast<std::uint8_t>(target[w] - a[w]);
            abs_a += a[w];
            abs_b += b[w];
          }
          if (b[j] < 1) return;
          if (abs_a < 1 || abs_b < 1) return;  // boundary terms are fixed
          IndexTable::Exps e2{};
          for (int w = 0; w < n; ++w) {
            e2[w] = a[w];
            e2[n + w] = b[w];
          }
          const int pos = t2.position(e2);
          auto it = column_of.find(pos);
          if (it == column_of.end()) return;
          row.entries[it->second] +=
              (abs_a % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(b[j]);
        });
        // boundary contribution: a = target - e_j (if b = e_j), coefficient
        // (-1)^{|a|} * 1 * [x_j from the boundary block] moved to the rhs
        slice_rows.push_back(std::move(row));
        rhs_specs.push_back({0, j, mu, 1.0});
      }
    }
    const int q_rows = static_cast<int>(slice_rows.size());

    // s-slice rows: c_{a, e_j} = s_j[a] for |a| = k-1
    for (int j = 0; j < n; ++j) {
      for (int mu = t1.degree_start[k - 1]; mu < t1.degree_start[k]; ++mu) {
        SliceRow row;
        IndexTable::Exps e2{};
        for (int w = 0; w < n; ++w) e2[w] = t1.exps[mu][w];
        e2[n + j] += 1;
        const int pos = t2.position(e2);
        auto it = column_of.find(pos);
        if (it != column_of.end()) row.entries[it->second] = 1.0;
        slice_rows.push_back(std::move(row));
        rhs_specs.push_back({1, j, mu, 1.0});
      }
    }
    // t-slice rows: c_{e_j, b} = (-1)^{|b|} s_j[b] for |b| = k-1
    for (int j = 0; j < n; ++j) {
      for (int mu = t1.degree_start[k - 1]; mu < t1.degree_start[k]; ++mu) {
        SliceRow row;
        IndexTable::Exps e2{};
        for (int w = 0; w < n; ++w) e2[n + w] = t1.exps[mu][w];
        e2[j] += 1;
        const int pos = t2.position(e2);
        auto it = column_of.find(pos);
        if (it != column_of.end()) row.entries[it->second] = 1.0;
        slice_rows.push_back(std::move(row));
        rhs_specs.push_back({2, j, mu, (t1.degree[mu] % 2 == 0 ? 1.0 : -1.0)});
      }
    }

    const int nrows = sga_rows + static_cast<int>(slice_rows.size());
    MatrixXd a_mat = MatrixXd::Zero(nrows, ncols);

    // fill the associativity block column by column
    for (int cidx = 0; cidx < ncols; ++cidx) {
      const auto& e2 = t2.exps[unknowns[cidx]];
      IndexTable::Exps a{}, b{};
      for (int w = 0; w < n; ++w) {
        a[w] = e2[w];
        b[w] = e2[n + w];
      }
      auto add3 = [&](const IndexTable::Exps& ea, const IndexTable::Exps& eb,
                      const IndexTable::Exps& ec, double coeff) {
        IndexTable::Exps e3{};
        for (int w = 0; w < n; ++w) {
          e3[w] = ea[w];
          e3[n + w] = eb[w];
          e3[2 * n + w] = ec[w];
        }
        a_mat(row0_sga + row_of_t3(e3), cidx) += coeff;
      };
      const IndexTable::Exps zero{};
      // B(p1, p2)
      add3(a, b, zero, 1.0);
      // B(p1 + p2, p3)
      sub_exponents(a, n, [&](const IndexTable::Exps& ap) {
        IndexTable::Exps rest{};
        for (int w = 0; w < n; ++w) rest[w] = static_cast<std::uint8_t>(a[w] - ap[w]);
        add3(ap, rest, b, multinom(a, ap, n));
      });
      // -B(p2, p3)
      add3(zero, a, b, -1.0);
      // -B(p1, p2 + p3)
      sub_exponents(b, n, [&](const IndexTable::Exps& bp) {
        IndexTable::Exps rest{};
        for (int w = 0; w < n; ++w) rest[w] = static_cast<std::uint8_t>(b[w] - bp[w]);
        add3(a, bp, rest, -multinom(b, bp, n));
      });
    }
    for (std::size_t r = 0; r < slice_rows.size(); ++r)
      for (const auto& [cidx, coeff] : slice_rows[r].entries)
        a_mat(sga_rows + static_cast<int>(r), cidx) = coeff;

    // --- right-hand sides, grouped by x-monomial key
    const SymbolicTripleChart chart = build_symbolic_triple_chart(s_data, n, k);
    std::map<std::uint64_t, VectorXd> rhs;
    auto rhs_slot = [&](std::uint64_t key) -> VectorXd& {
      auto it = rhs.find(key);
      if (it == rhs.end())
        it = rhs.emplace(key, VectorXd::Zero(nrows)).first;
      return it->second;
    };
    // associativity: A c = -residual_k
    for (int idx = t3.degree_start[k]; idx < t3.degree_start[k + 1]; ++idx) {
      const Poly& c = chart.sga_residual.coeff_at(idx);
      for (const auto& [key, coeff] : c.terms())
        rhs_slot(key)(row0_sga + idx - t3.degree_start[k]) -= coeff;
    }
    // slices: fetch target coefficients from Q and s
    for (std::size_t r = 0; r < rhs_specs.size(); ++r) {
      const RhsSpec& spec = rhs_specs[r];
      const int row = sga_rows + static_cast<int>(r);
      const auto& source_series =
          spec.kind == 0 ? spray.q_series()[spec.component]
                         : spray.s_series()[spec.component];
      const Poly target_coeff = source_series.coeff_at(spec.t1_index) * spec.sign;
      for (const auto& [key, coeff] : target_coeff.terms())
        rhs_slot(key)(row) += coeff;
    }

    // --- solve per x-monomial and write the coefficients
    int kernel = 0;
    double worst = 0.0;
    for (const auto& [key, b_vec] : rhs) {
      const LsqResult sol = solve_least_squares(a_mat, b_vec);
      kernel = std::max(kernel, sol.kernel_dim);
      worst = std::max(worst, sol.residual);
      if (sol.residual > 1e-7 * std::max(1.0, b_vec.norm()))
        throw domain_error("series backend: slice-consistency check failed at order " +
                           std::to_string(k));
      for (int cidx = 0; cidx < ncols; ++cidx) {
        if (sol.solution(cidx) == 0.0) continue;
        Poly& slot = s_data.coeff_at(unknowns[cidx]);
        slot += Poly::monomial_from_key(key, sol.solution(cidx), n);
      }
    }
    report.kernel_dims.push_back(kernel);
    report.max_residual = std::max(report.max_residual, worst);
    if (kernel > 0) report.underdetermined = true;
  }

  GeneratingFunction out(n, order, Backend::series, std::move(s_data),
                         structure.id());
  out.set_solve_report(std::move(report));
  return out;
}

}  // namespace

GeneratingFunction build_generating_function(const StructureConfig& structure,
                                             Backend backend, int order) {
  const PoissonStructure pi = structure.poisson();
  const int n = pi.dim();
  if (order < 1) throw invalid_input("generating function: order must be >= 1");

  switch (backend) {
    case Backend::closed_zero: {
      if (pi.max_poly_degree() >= 0)
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (!pi.upper(i, j).is_zero())
              throw invalid_input("closed_zero backend needs the zero structure");
      return GeneratingFunction(n, order, backend, boundary_series(n, order),
                                structure.id());
    }
    case Backend::closed_constant: {
      if (pi.max_poly_degree() > 0)
        throw invalid_input("closed_constant backend needs a constant structure");
      Series<Poly> s = boundary_series(n, order < 2 ? 2 : order);
      const MatrixXd pimat = pi.eval(VectorXd::Zero(n));
      std::vector<int> e(2 * n, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (pimat(i, j) == 0.0) continue;
          e[i] += 1;
          e[n + j] += 1;
          Poly c(n, 0.5 * pimat(i, j));
          Poly prev = s.coeff(e);
          s.set_coeff(e, prev + c);
          e[i] -= 1;
          e[n + j] -= 1;
        }
      return GeneratingFunction(n, order < 2 ? 2 : order, backend, std::move(s),
                                structure.id());
    }
    case Backend::closed_linear: {
      if (!structure.lie)
        throw invalid_input("closed_linear backend needs Lie algebra data");
      const auto& lie = *structure.lie;
      // spray orientation: S(p1,p2,x) pairs x with the product p2 . p1
      const auto bch = liecase::bch_series(lie, order);
      Series<Poly> s(2 * n, order, Poly(n));
      for (int kcomp = 0; kcomp < n; ++kcomp) {
        for (const auto& [key, coeff] : bch[kcomp].terms()) {
          // bch variables: first block = first factor (here p2), second = p1
          std::vector<int> e(2 * n, 0);
          for (int v = 0; v < n; ++v) {
            e[n + v] = Poly::exponent(key, v);        // first factor -> p2
            e[v] = Poly::exponent(key, n + v);        // second factor -> p1
          }
          Poly prev = s.coeff(e);
          s.set_coeff(e, prev + Poly::variable(kcomp, n) * coeff);
        }
      }
      return GeneratingFunction(n, order, backend, std::move(s), structure.id());
    }
    case Backend::series:
      return solve_series_backend(structure, order);
  }
  throw invalid_input("bad backend");
}

}  // namespace groupoid
}  // namespace sgalab
