#pragma once

#include "colour3/ddouble.hpp"
#include "colour3/quad.hpp"

#include <memory>
#include <string>
#include <vector>

// Order-by-order solution of the closed integral equation for the planar
// two-point function G(p1,p2) = sum_n lambda^{2n} G_{2n}(p1,p2).
//
// Discretization: the momentum grid is the node set of the composite
// quadrature rule (mapped to p = q), so every integral in the recursion is a
// weighted sum over grid values and no interpolation enters the right-hand
// side. Off-grid values use panel-local barycentric interpolation in
// u = p/(1+p).
//
// The recursion divides by differences of neighbouring nodes, which acts
// like a derivative and multiplies rounding noise by roughly points^2/width
// at every order. Grid values and all derived operators are therefore kept
// in double-double; the nodes and weights themselves are exact doubles and
// define the discrete problem.

namespace colour3::recursion {

struct EngineConfig {
  int panels = 40;
  int points = 16;
  double ratio = 2.0;
  double colour = 3.0; // multiplicity of the colour sum in the convolution term
};

class Grid {
public:
  explicit Grid(const quad::Rule &rule);

  const quad::Rule &rule() const { return rule_; }
  std::size_t size() const { return rule_.size(); }
  const std::vector<double> &p() const { return rule_.q; }
  const std::vector<double> &w() const { return rule_.wq; }
  int panel_start(std::size_t i) const { return int(i) / rule_.points * rule_.points; }

  // d/dp at node i of the panel interpolant through f at the panel's nodes,
  // as weights over that panel (length points).
  const DD *dp_row(std::size_t i) const { return &dp_[i * rule_.points]; }

  // Interpolation weights at momentum x: fills `w` (length points) and
  // returns the first node index of the panel used.
  int lagrange(double x, double *w) const;

private:
  quad::Rule rule_;
  std::vector<DD> dp_;
};

struct OrderCoefficient {
  int order = 0;
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;   // size x size, row-major, symmetric
  std::vector<double> lo;       // low parts: the grid value is values + lo
  double asymmetry = 0;         // max |G_ij - G_ji| / max |G| before symmetrizing

  double at(std::size_t i, std::size_t j) const { return values[i * grid->size() + j]; }
  double value(double p1, double p2) const;
  std::vector<double> row(double p1) const; // G(p1, q_l) for all nodes l
};

struct DiagonalEstimate {
  double value = 0;
  double contraction = 0; // |v(h/4)-v(h/2)| / |v(h/2)-v(h)|
};

class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Engine {
public:
  explicit Engine(EngineConfig cfg = {});

  const EngineConfig &config() const { return cfg_; }
  const Grid &grid() const { return *grid_; }
  const OrderCoefficient &seed();
  const OrderCoefficient &step();
  // run steps until `order` is available
  const OrderCoefficient &order(int n);
  int computed() const { return int(history_.size()) - 1; }

  // lim_{p2 -> p} G_{2n}(p, p2), Richardson extrapolation of interpolated
  // values at symmetric offsets h, h/2, h/4 with h = 1e-2 (1+p).
  DiagonalEstimate diagonal(int n, double p);

private:
  EngineConfig cfg_;
  std::shared_ptr<const Grid> grid_;
  std::vector<OrderCoefficient> history_;
  std::vector<std::vector<DD>> wsum_;  // S_k[j] = sum_l w_l G_k[j][l]
  std::vector<double> kernel_hi_, kernel_lo_; // w_l / (q_l - q_j), zero on l == j
  std::vector<DD> kernel_colsum_;
  std::vector<double> weight_;         // w_l, and zeros as its low part
  std::vector<double> zeros_;
};

struct SeriesEntry {
  int order = 0;
  double value = 0;
  double error = 0;        // |value - value at half resolution|, floored at roundoff
  double contraction = 0;  // diagonal extrapolation contraction rate
};

struct SeriesTable {
  std::vector<SeriesEntry> coefficients;
  EngineConfig config;
  EngineConfig reference; // half-resolution rule used for the error estimate
};

// Half-resolution partner of a configuration: half the panels over the same
// t-range (ratio squared).
EngineConfig coarsen(const EngineConfig &cfg);
EngineConfig refine(const EngineConfig &cfg);

// c_n = G_{2n}(0,0) for n = 0..max_order.
SeriesTable g00_series(int max_order, const EngineConfig &cfg = {});

// |LHS - RHS| of the closed integral equation with G replaced by the series
// truncated after order n, at coupling lambda and off-diagonal (p1,p2).
double closed_equation_residual(Engine &engine, int n, double lambda, double p1, double p2);

} // namespace colour3::recursion
