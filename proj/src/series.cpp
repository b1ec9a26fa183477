#include "sgalab/series.hpp"

#include <map>
#include <mutex>

namespace sgalab {

namespace {

void enumerate(int nvars, int var, int remaining, IndexTable::Exps& current,
               std::vector<IndexTable::Exps>& out) {
  if (var == nvars - 1) {
    current[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(current);
    current[var] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[var] = static_cast<std::uint8_t>(e);
    enumerate(nvars, var + 1, remaining - e, current, out);
  }
  current[var] = 0;
}

}  // namespace

void IndexTable::build() {
  degree_start.assign(order + 2, 0);
  IndexTable::Exps current{};
  for (int d = 0; d <= order; ++d) {
    degree_start[d] = static_cast<int>(exps.size());
    if (nvars == 0) {
      if (d == 0) exps.push_back(current);
    } else {
      enumerate(nvars, 0, d, current, exps);
    }
  }
  degree_start[order + 1] = static_cast<int>(exps.size());
  degree.resize(exps.size());
  for (std::size_t i = 0; i < exps.size(); ++i) {
    int d = 0;
    for (int v = 0; v < nvars; ++v) d += exps[i][v];
    degree[i] = d;
    pos_[pack(exps[i], nvars)] = static_cast<int>(i);
  }
}

const IndexTable& IndexTable::get(int nvars, int order) {
  if (nvars < 0 || nvars > kMaxSeriesVars)
    throw invalid_input("IndexTable: unsupported variable count");
  if (order < 0 || order > 31) throw invalid_input("IndexTable: unsupported order");
  static std::mutex mu;
  static std::map<std::pair<int, int>, IndexTable*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(nvars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto* table = new IndexTable;
  table->nvars = nvars;
  table->order = order;
  table->build();
  cache[key] = table;
  return *table;
}

std::vector<Series<double>> invert_series_map(const std::vector<Series<double>>& f) {
  const int m = static_cast<int>(f.size());
  if (m == 0) throw invalid_input("invert_series_map: empty map");
  const int nvars = f[0].nvars();
  const int order = f[0].order();
  if (nvars != m) throw invalid_input("invert_series_map: map must be square");

  MatrixXd lin(m, m);
  for (int i = 0; i < m; ++i) {
    std::vector<int> e(nvars, 0);
    for (int v = 0; v < nvars; ++v) {
      e[v] = 1;
      lin(i, v) = f[i].coeff(e);
      e[v] = 0;
    }
    if (f[i].coeff(std::vector<int>(nvars, 0)) != 0.0)
      throw invalid_input("invert_series_map: nonzero constant term");
  }
  Eigen::FullPivLU<MatrixXd> lu(lin);
  if (!lu.isInvertible())
    throw invalid_input("invert_series_map: singular linear part");
  const MatrixXd lin_inv = lu.inverse();

  // higher-order tail H with f = lin p + H
  std::vector<Series<double>> tail;
  tail.reserve(m);
  for (int i = 0; i < m; ++i) {
    Series<double> h = f[i];
    h.coeff_at(0) = 0.0;
    std::vector<int> e(nvars, 0);
    for (int v = 0; v < nvars; ++v) {
      e[v] = 1;
      h.set_coeff(e, 0.0);
      e[v] = 0;
    }
    tail.push_back(h);
  }

  // fixed point g = lin^{-1} (p - H(g)); each sweep gains one order
  std::vector<Series<double>> g(m, Series<double>(nvars, order, 0.0));
  for (int i = 0; i < m; ++i) {
    std::vector<int> e(nvars, 0);
    for (int v = 0; v < nvars; ++v) {
      e[v] = 1;
      g[i].set_coeff(e, lin_inv(i, v));
      e[v] = 0;
    }
  }
  for (int sweep = 0; sweep < order; ++sweep) {
    std::vector<Series<double>> hg(m, Series<double>(nvars, order, 0.0));
    for (int i = 0; i < m; ++i) hg[i] = compose(tail[i], g);
    std::vector<Series<double>> next(m, Series<double>(nvars, order, 0.0));
    for (int i = 0; i < m; ++i) {
      Series<double> acc(nvars, order, 0.0);
      std::vector<int> e(nvars, 0);
      for (int v = 0; v < nvars; ++v) {
        Series<double> pv(nvars, order, 0.0);
        e[v] = 1;
        pv.set_coeff(e, 1.0);
        e[v] = 0;
        acc = acc + (pv - hg[v]) * lin_inv(i, v);
      }
      next[i] = acc;
    }
    g = next;
  }
  return g;
}

}  // namespace sgalab
