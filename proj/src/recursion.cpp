#include "colour3/recursion.hpp"
#include "colour3/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace colour3::recursion {

Grid::Grid(const quad::Rule &rule) : rule_(rule) {
  const int n = rule_.points;
  const std::size_t Q = rule_.size();
  dp_.assign(Q * n, DD());
  std::vector<DD> bw(n), du(n * n);
  for (int k = 0; k < rule_.panels; ++k) {
    const int s = k * n;
    const double *t = &rule_.t[s];
    // barycentric weights 1/prod(t_j - t_m) of the actual nodes, with the
    // differences scaled by a power of two near 1/width to stay in range
    const double scale = std::ldexp(1.0, -std::ilogb(rule_.bounds[k + 1] - rule_.bounds[k]));
    for (int j = 0; j < n; ++j) {
      DD prod = 1.0;
      for (int m = 0; m < n; ++m)
        if (m != j)
          prod *= dd::two_diff(t[j], t[m]) * DD(scale);
      bw[j] = DD(1.0) / prod;
    }
    // differentiation matrix in u = t for the panel interpolant
    for (int i = 0; i < n; ++i) {
      DD diag = 0.0;
      for (int j = 0; j < n; ++j) {
        if (i == j)
          continue;
        DD v = (bw[j] / bw[i]) / dd::two_diff(t[i], t[j]);
        du[i * n + j] = v;
        diag -= v;
      }
      du[i * n + i] = diag;
    }
    // d/dp = (1-u)^2 d/du at the node
    for (int i = 0; i < n; ++i) {
      DD c = dd::two_diff(1.0, t[i]);
      c = c * c;
      for (int j = 0; j < n; ++j)
        dp_[(s + i) * n + j] = c * du[i * n + j];
    }
  }
}

int Grid::lagrange(double x, double *w) const {
  const int n = rule_.points;
  double u = x / (1 + x);
  int k = rule_.panel_of(u);
  int s = k * n;
  const double *t = &rule_.t[s];
  const double *bw = &rule_.bary[s];
  for (int j = 0; j < n; ++j)
    if (u == t[j]) {
      std::fill(w, w + n, 0.0);
      w[j] = 1;
      return s;
    }
  double sum = 0;
  for (int j = 0; j < n; ++j) {
    w[j] = bw[j] / (u - t[j]);
    sum += w[j];
  }
  for (int j = 0; j < n; ++j)
    w[j] /= sum;
  return s;
}

double OrderCoefficient::value(double p1, double p2) const {
  const int n = grid->rule().points;
  const std::size_t Q = grid->size();
  std::vector<double> la(n), lb(n);
  int sa = grid->lagrange(p1, la.data());
  int sb = grid->lagrange(p2, lb.data());
  double acc = 0;
  for (int i = 0; i < n; ++i) {
    const double *r = &values[(sa + i) * Q + sb];
    double ri = 0;
    for (int j = 0; j < n; ++j)
      ri += lb[j] * r[j];
    acc += la[i] * ri;
  }
  return acc;
}

std::vector<double> OrderCoefficient::row(double p1) const {
  const int n = grid->rule().points;
  const std::size_t Q = grid->size();
  std::vector<double> la(n), out(Q, 0.0);
  int sa = grid->lagrange(p1, la.data());
  for (int i = 0; i < n; ++i) {
    const double *r = &values[(sa + i) * Q];
    for (std::size_t l = 0; l < Q; ++l)
      out[l] += la[i] * r[l];
  }
  return out;
}

Engine::Engine(EngineConfig cfg) : cfg_(cfg) {
  grid_ = std::make_shared<const Grid>(quad::make_rule(cfg.panels, cfg.points, cfg.ratio));
  const std::size_t Q = grid_->size();
  const auto &p = grid_->p();
  weight_ = grid_->w();
  zeros_.assign(Q, 0.0);
  kernel_hi_.assign(Q * Q, 0.0);
  kernel_lo_.assign(Q * Q, 0.0);
  kernel_colsum_.assign(Q, DD());
  for (std::size_t j = 0; j < Q; ++j) {
    DD acc = 0.0;
    for (std::size_t l = 0; l < Q; ++l) {
      if (l == j)
        continue;
      DD a = DD(weight_[l]) / dd::two_diff(p[l], p[j]);
      kernel_hi_[j * Q + l] = a.hi;
      kernel_lo_[j * Q + l] = a.lo;
      acc += a;
    }
    kernel_colsum_[j] = acc;
  }
}

namespace {

// 1 + a + b and a - b for exact double nodes
DD one_plus(double a, double b) { return DD(1.0) + dd::two_sum(a, b); }

std::vector<DD> weighted_rows(const OrderCoefficient &c, const std::vector<double> &w,
                              const std::vector<double> &zeros) {
  const std::size_t Q = c.grid->size();
  std::vector<DD> s(Q);
  for (std::size_t j = 0; j < Q; ++j)
    s[j] = kernels::dd_dot(&c.values[j * Q], &c.lo[j * Q], w.data(), zeros.data(), Q);
  return s;
}

} // namespace

const OrderCoefficient &Engine::seed() {
  if (!history_.empty())
    return history_.front();
  const std::size_t Q = grid_->size();
  const auto &p = grid_->p();
  OrderCoefficient c;
  c.order = 0;
  c.grid = grid_;
  c.values.resize(Q * Q);
  c.lo.resize(Q * Q);
  for (std::size_t i = 0; i < Q; ++i)
    for (std::size_t j = 0; j < Q; ++j) {
      DD v = DD(1.0) / one_plus(p[i], p[j]);
      c.values[i * Q + j] = v.hi;
      c.lo[i * Q + j] = v.lo;
    }
  history_.push_back(std::move(c));
  wsum_.push_back(weighted_rows(history_[0], weight_, zeros_));
  return history_.front();
}

const OrderCoefficient &Engine::step() {
  if (history_.empty())
    seed();
  const int n = int(history_.size());
  const std::size_t Q = grid_->size();
  const int np = grid_->rule().points;
  const auto &p = grid_->p();
  const OrderCoefficient &prev = history_[n - 1];
  auto G = [&](std::size_t i, std::size_t j) { return DD(prev.values[i * Q + j], prev.lo[i * Q + j]); };

  // convolution term: colour * sum_k G_{n-1-k}(p_i,p_j) (S_k(p_j) - S_k(p_i))
  std::vector<DD> B(Q * Q);
  for (int k = 0; k < n; ++k) {
    const OrderCoefficient &gm = history_[n - 1 - k];
    const std::vector<DD> &S = wsum_[k];
    for (std::size_t i = 0; i < Q; ++i)
      for (std::size_t j = 0; j < Q; ++j) {
        DD g(gm.values[i * Q + j], gm.lo[i * Q + j]);
        B[i * Q + j] += DD(cfg_.colour) * g * (S[j] - S[i]);
      }
  }

  // Ta[i][j] = int dq (G(p_i,q) - G(p_i,p_j)) / (q - p_j); the node q = p_j
  // contributes w_j times the q-derivative of G(p_i, .) there.
  std::vector<double> ta_hi(Q * Q), ta_lo(Q * Q);
  kernels::dd_gemm_nt(prev.values.data(), prev.lo.data(), kernel_hi_.data(), kernel_lo_.data(), ta_hi.data(),
                      ta_lo.data(), Q, Q, Q);
  std::vector<DD> Ta(Q * Q);
  for (std::size_t i = 0; i < Q; ++i)
    for (std::size_t j = 0; j < Q; ++j) {
      const DD *d = grid_->dp_row(j);
      const std::size_t s = grid_->panel_start(j);
      DD dq = 0.0;
      for (int m = 0; m < np; ++m)
        dq += d[m] * G(i, s + m);
      Ta[i * Q + j] = DD(ta_hi[i * Q + j], ta_lo[i * Q + j]) - G(i, j) * kernel_colsum_[j] + DD(weight_[j]) * dq;
    }
  for (std::size_t i = 0; i < Q; ++i)
    for (std::size_t j = 0; j < Q; ++j)
      B[i * Q + j] += Ta[j * Q + i] - Ta[i * Q + j];

  std::vector<DD> v(Q * Q);
  for (std::size_t i = 0; i < Q; ++i)
    for (std::size_t j = 0; j < Q; ++j)
      if (i != j)
        v[i * Q + j] = B[i * Q + j] / (one_plus(p[i], p[j]) * dd::two_diff(p[i], p[j]));

  // Diagonal: the bracket vanishes at p1 = p2, so G_{2n}(p,p) is its
  // p1-derivative over (1+2p).
  for (std::size_t i = 0; i < Q; ++i) {
    const DD *d = grid_->dp_row(i);
    const std::size_t s = grid_->panel_start(i);
    DD dB = 0.0;
    for (int m = 0; m < np; ++m)
      dB += d[m] * B[(s + m) * Q + i];
    v[i * Q + i] = dB / one_plus(p[i], p[i]);
  }

  double vmax = 0, asym = 0;
  for (std::size_t i = 0; i < Q; ++i)
    for (std::size_t j = 0; j < Q; ++j) {
      double x = v[i * Q + j].hi;
      if (!isfinite(v[i * Q + j]) || std::fabs(x) > 1e12)
        throw DivergenceError("order " + std::to_string(n) + " diverged at grid node (" +
                              std::to_string(p[i]) + ", " + std::to_string(p[j]) +
                              "); grid or rule misconfigured");
      vmax = std::max(vmax, std::fabs(x));
      if (j > i)
        asym = std::max(asym, std::fabs(x - v[j * Q + i].hi));
    }

  OrderCoefficient c;
  c.order = n;
  c.grid = grid_;
  c.asymmetry = vmax > 0 ? asym / vmax : 0;
  c.values.resize(Q * Q);
  c.lo.resize(Q * Q);
  for (std::size_t i = 0; i < Q; ++i)
    for (std::size_t j = i; j < Q; ++j) {
      DD m = (v[i * Q + j] + v[j * Q + i]) * DD(0.5);
      c.values[i * Q + j] = c.values[j * Q + i] = m.hi;
      c.lo[i * Q + j] = c.lo[j * Q + i] = m.lo;
    }
  history_.push_back(std::move(c));
  wsum_.push_back(weighted_rows(history_.back(), weight_, zeros_));
  return history_.back();
}

const OrderCoefficient &Engine::order(int n) {
  if (n < 0)
    throw std::invalid_argument("order must be nonnegative");
  seed();
  while (computed() < n)
    step();
  return history_[n];
}

DiagonalEstimate Engine::diagonal(int n, double p) {
  if (!(p >= 0) || !std::isfinite(p))
    throw std::invalid_argument("diagonal: momentum must be finite and nonnegative");
  if (n == 0)
    return {1.0 / (1.0 + 2.0 * p), 0.0};
  const OrderCoefficient &c = order(n);
  double h = 1e-2 * (1 + p);
  double v[3];
  for (int k = 0; k < 3; ++k) {
    double hk = h / double(1 << k);
    v[k] = c.value(p - hk, p + hk);
  }
  // even in the offset: eliminate h^2, then h^4
  double r1 = (4 * v[1] - v[0]) / 3, r2 = (4 * v[2] - v[1]) / 3;
  DiagonalEstimate out;
  out.value = (16 * r2 - r1) / 15;
  double e1 = std::fabs(v[1] - v[0]), e2 = std::fabs(v[2] - v[1]);
  double floor = 1e-13 * (1 + std::fabs(out.value));
  out.contraction = e1 > 0 ? e2 / e1 : 0;
  if (e1 > floor && out.contraction > 0.5)
    throw DivergenceError("diagonal extrapolation at p = " + std::to_string(p) +
                          " does not contract (rate " + std::to_string(out.contraction) + ")");
  return out;
}

EngineConfig coarsen(const EngineConfig &cfg) {
  EngineConfig c = cfg;
  c.panels = std::max(1, cfg.panels / 2);
  c.ratio = cfg.ratio * cfg.ratio;
  return c;
}

EngineConfig refine(const EngineConfig &cfg) {
  EngineConfig c = cfg;
  c.panels = 2 * cfg.panels;
  c.ratio = std::sqrt(cfg.ratio);
  return c;
}

SeriesTable g00_series(int max_order, const EngineConfig &cfg) {
  if (max_order < 0 || max_order > 4)
    throw std::invalid_argument("max order must be in 0..4");
  SeriesTable table;
  table.config = cfg;
  table.reference = coarsen(cfg);
  Engine fine(cfg), coarse(table.reference);
  for (int n = 0; n <= max_order; ++n) {
    DiagonalEstimate a = fine.diagonal(n, 0.0);
    DiagonalEstimate b = coarse.diagonal(n, 0.0);
    SeriesEntry e;
    e.order = n;
    e.value = a.value;
    e.contraction = a.contraction;
    double roundoff = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(a.value));
    e.error = std::max(std::fabs(a.value - b.value), roundoff);
    table.coefficients.push_back(e);
  }
  return table;
}

double closed_equation_residual(Engine &engine, int n, double lambda, double p1, double p2) {
  if (p1 == p2)
    throw std::invalid_argument("residual: needs off-diagonal momenta");
  engine.order(n);
  const std::size_t Q = engine.grid().size();
  const auto &q = engine.grid().p();
  const auto &w = engine.grid().w();
  const double l2 = lambda * lambda;

  auto series = [&](double a, double b) {
    double acc = 0, lk = 1;
    for (int k = 0; k <= n; ++k, lk *= l2)
      acc += lk * engine.order(k).value(a, b);
    return acc;
  };
  std::vector<double> r1(Q, 0.0), r2(Q, 0.0);
  double lk = 1;
  for (int k = 0; k <= n; ++k, lk *= l2) {
    auto a = engine.order(k).row(p1);
    auto b = engine.order(k).row(p2);
    for (std::size_t l = 0; l < Q; ++l) {
      r1[l] += lk * a[l];
      r2[l] += lk * b[l];
    }
  }
  const double g12 = series(p1, p2);
  auto g_p1 = [&](double x) { return series(p1, x); };
  auto g_p2 = [&](double x) { return series(p2, x); };
  const double thr = 1e-4;

  double conv = 0, sub = 0;
  for (std::size_t l = 0; l < Q; ++l) {
    conv += w[l] * (r2[l] - r1[l]);
    double a = std::fabs(q[l] - p2) > thr * (1 + p2) ? (r1[l] - g12) / (q[l] - p2)
                                                      : quad::eval_subtracted(g_p1, p2, q[l], thr);
    double b = std::fabs(q[l] - p1) > thr * (1 + p1) ? (r2[l] - g12) / (q[l] - p1)
                                                      : quad::eval_subtracted(g_p2, p1, q[l], thr);
    sub += w[l] * (-a + b);
  }
  const double s = 1 + p1 + p2, d = p1 - p2;
  double rhs = 1 / s + l2 / (s * d) * (engine.config().colour * g12 * conv + sub);
  return std::fabs(g12 - rhs);
}

} // namespace colour3::recursion
