#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Composite Gauss-Legendre quadrature on [0, inf) through q = t/(1-t).
// Panels in t shrink geometrically toward t = 1.

namespace colour3::quad {

struct Rule {
  int panels = 0;
  int points = 0;
  double ratio = 2.0;
  std::vector<double> bounds;   // panel boundaries in t, size panels+1
  std::vector<double> t;        // nodes in t, increasing
  std::vector<double> w;        // Gauss weights in t
  std::vector<double> q;        // mapped nodes t/(1-t)
  std::vector<double> wq;       // weights including the Jacobian 1/(1-t)^2
  std::vector<double> bary;     // barycentric weights, per panel, scale-free

  std::size_t size() const { return t.size(); }
  // index of the panel holding t (clamped to the outer panels)
  int panel_of(double tt) const;
};

class IntegrationError : public std::runtime_error {
public:
  IntegrationError(std::size_t node, double q, double value);
  std::size_t node;
  double q;
};

// Gauss-Legendre nodes and weights on [-1,1], increasing.
void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w);

Rule make_rule(int panels, int points, double ratio = 2.0);

// Rule with twice the panels over the same range (ratio -> sqrt(ratio)).
Rule refine(const Rule &r);

double integrate(const Rule &rule, const std::function<double(double)> &f);

// (g(q) - g(q0))/(q - q0), switching to a Taylor expansion built from
// central differences when |q - q0| <= threshold*(1+q0).
double eval_subtracted(const std::function<double(double)> &g, double q0, double q,
                       double threshold = 1e-4);

} // namespace colour3::quad
