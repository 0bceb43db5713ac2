#include "colour3/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace colour3::quad {

namespace {
std::string describe(std::size_t node, double q, double value) {
  std::ostringstream os;
  os << "non-finite integrand " << value << " at node " << node << " (q = " << q << ")";
  return os.str();
}
} // namespace

IntegrationError::IntegrationError(std::size_t node_, double q_, double value)
    : std::runtime_error(describe(node_, q_, value)), node(node_), q(q_) {}

void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16)
        break;
    }
    // recompute derivative at the converged root
    double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      double pk = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    double wi = 2 / ((1 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = wi;
  }
  if (n % 2 == 1)
    x[n / 2] = 0;
}

int Rule::panel_of(double tt) const {
  auto it = std::upper_bound(bounds.begin(), bounds.end(), tt);
  int k = int(it - bounds.begin()) - 1;
  return std::clamp(k, 0, panels - 1);
}

Rule make_rule(int panels, int points, double ratio) {
  if (panels < 1 || points < 2)
    throw std::invalid_argument("make_rule: need panels >= 1 and points >= 2");
  if (!(ratio >= 1.0) || !std::isfinite(ratio))
    throw std::invalid_argument("make_rule: refinement ratio must be >= 1");
  Rule r;
  r.panels = panels;
  r.points = points;
  r.ratio = ratio;

  std::vector<double> widths(panels);
  double total = 0;
  for (int k = 0; k < panels; ++k) {
    widths[k] = std::pow(ratio, -k);
    total += widths[k];
  }
  r.bounds.assign(panels + 1, 0.0);
  for (int k = 0; k < panels; ++k)
    r.bounds[k + 1] = r.bounds[k] + widths[k] / total;
  r.bounds[panels] = 1.0;

  std::vector<double> x, w;
  gauss_legendre(points, x, w);
  std::vector<double> bw(points);
  for (int j = 0; j < points; ++j)
    bw[j] = ((j % 2) ? -1.0 : 1.0) * std::sqrt((1 - x[j] * x[j]) * w[j]);

  for (int k = 0; k < panels; ++k) {
    double a = r.bounds[k], b = r.bounds[k + 1];
    for (int j = 0; j < points; ++j) {
      double tt = 0.5 * (b - a) * x[j] + 0.5 * (a + b);
      double ww = 0.5 * (b - a) * w[j];
      if (!(tt < 1.0))
        throw std::invalid_argument("make_rule: panels too fine for double precision");
      r.t.push_back(tt);
      r.w.push_back(ww);
      r.q.push_back(tt / (1 - tt));
      r.wq.push_back(ww / ((1 - tt) * (1 - tt)));
      r.bary.push_back(bw[j]);
    }
  }
  return r;
}

Rule refine(const Rule &r) { return make_rule(2 * r.panels, r.points, std::sqrt(r.ratio)); }

double integrate(const Rule &rule, const std::function<double(double)> &f) {
  double sum = 0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double v = f(rule.q[i]);
    if (!std::isfinite(v))
      throw IntegrationError(i, rule.q[i], v);
    sum += rule.wq[i] * v;
  }
  return sum;
}

double eval_subtracted(const std::function<double(double)> &g, double q0, double q,
                       double threshold) {
  double dq = q - q0;
  if (std::fabs(dq) > threshold * (1 + q0))
    return (g(q) - g(q0)) / dq;
  double h = 1e-3 * (1 + q0);
  double gp1 = g(q0 + h), gm1 = g(q0 - h), gp2 = g(q0 + 2 * h), gm2 = g(q0 - 2 * h);
  double d1 = (8 * (gp1 - gm1) - (gp2 - gm2)) / (12 * h);
  double d2 = ((gp2 + gm2) - (gp1 + gm1)) / (3 * h * h);
  return d1 + 0.5 * d2 * dq;
}

} // namespace colour3::quad
