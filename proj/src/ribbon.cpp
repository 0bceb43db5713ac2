#include "colour3/ribbon.hpp"
#include "colour3/kernels.hpp"
#include "colour3/quad.hpp"
#include "extrapolate.hpp"
#include "polylog_impl.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

namespace colour3::ribbon {

namespace {

void fail(const std::string &what) { throw InvalidGraph("ribbon graph: " + what); }

int find(std::vector<int> &parent, int x) {
  while (parent[x] != x)
    x = parent[x] = parent[parent[x]];
  return x;
}

} // namespace

int trace_faces(const std::vector<int> &sigma, const std::vector<int> &alpha, std::vector<int> &face) {
  face.assign(alpha.size(), -1);
  int faces = 0;
  for (std::size_t h = 0; h < alpha.size(); ++h) {
    if (face[h] >= 0)
      continue;
    for (int x = int(h); face[x] < 0; x = sigma[alpha[x]])
      face[x] = faces;
    ++faces;
  }
  return faces;
}

RibbonGraph::RibbonGraph(std::vector<Vertex> vertices, std::vector<int> alpha, std::vector<int> colour)
    : vertices_(std::move(vertices)), alpha_(std::move(alpha)), colour_(std::move(colour)) {
  const int H = int(alpha_.size());
  if (H == 0 || int(colour_.size()) != H)
    fail("alpha and colour must be non-empty and of equal size");
  sigma_.assign(H, -1);
  vertex_.assign(H, -1);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const auto &hs = vertices_[v].half_edges;
    if (hs.empty())
      fail("vertex " + std::to_string(v) + " has no half-edges");
    for (std::size_t i = 0; i < hs.size(); ++i) {
      int h = hs[i];
      if (h < 0 || h >= H || vertex_[h] >= 0)
        fail("half-edge " + std::to_string(h) + " missing or listed twice");
      vertex_[h] = int(v);
      sigma_[h] = hs[(i + 1) % hs.size()];
    }
  }
  for (int h = 0; h < H; ++h) {
    if (vertex_[h] < 0)
      fail("half-edge " + std::to_string(h) + " belongs to no vertex");
    int m = alpha_[h];
    if (m < 0 || m >= H || m == h || alpha_[m] != h)
      fail("alpha is not a fixed-point-free involution at " + std::to_string(h));
    if (colour_[h] < 1 || colour_[h] > 3 || colour_[m] != colour_[h])
      fail("edge colour at half-edge " + std::to_string(h) + " must be one of 1,2,3 on both ends");
  }

  int whites = 0;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const auto &vx = vertices_[v];
    if (vx.kind == VertexKind::external) {
      ++whites;
      continue;
    }
    if (vx.half_edges.size() != 3)
      fail("internal vertex " + std::to_string(v) + " is not trivalent");
    int mask = 0;
    for (int h : vx.half_edges)
      mask |= 1 << colour_[h];
    if (mask != 0b1110)
      fail("internal vertex " + std::to_string(v) + " does not carry all three colours");
  }
  if (whites == 0)
    fail("no external vertex");

  std::vector<int> parent(vertices_.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (int h = 0; h < H; ++h)
    parent[find(parent, vertex_[h])] = find(parent, vertex_[alpha_[h]]);
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (find(parent, int(v)) != find(parent, 0))
      fail("graph is not connected");

  faces_ = trace_faces(sigma_, alpha_, face_);
  if (euler_characteristic() != 2)
    fail("not planar: V - E + F = " + std::to_string(euler_characteristic()));

  std::vector<int> owner(faces_, -1);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertices_[v].kind != VertexKind::external)
      continue;
    for (int h : vertices_[v].half_edges) {
      int f = face_[h];
      if (owner[f] >= 0)
        fail("face " + std::to_string(f) + " touches an external vertex more than once");
      owner[f] = int(v);
      external_.push_back(f);
    }
  }
  label_.assign(faces_, -1);
  for (std::size_t i = 0; i < external_.size(); ++i)
    label_[external_[i]] = int(i);
  for (int h = 0; h < H; ++h) {
    int f = face_[h];
    if (label_[f] < 0) {
      label_[f] = int(external_.size() + internal_.size());
      internal_.push_back(f);
    }
  }

  for (int h = 0; h < H; ++h)
    if (h < alpha_[h])
      edges_.push_back({h, alpha_[h], colour_[h], face_[h], face_[alpha_[h]]});
}

int RibbonGraph::boundary_count() const {
  return int(std::count_if(vertices_.begin(), vertices_.end(),
                           [](const Vertex &v) { return v.kind == VertexKind::external; }));
}

int RibbonGraph::internal_vertex_count() const { return int(vertices_.size()) - boundary_count(); }

int RibbonGraph::euler_characteristic() const {
  return int(vertices_.size()) - half_edge_count() / 2 + faces_;
}

// ---------------------------------------------------------------------------
// amplitudes

namespace {

double integrate_graph(const RibbonGraph &g, const std::vector<double> &externals,
                       const quad::Rule &rule) {
  const int L = int(g.internal_faces().size());
  const std::size_t ne = externals.size();
  std::vector<std::pair<int, int>> lab;
  for (const auto &e : g.edges())
    lab.emplace_back(g.label_index(e.face_a), g.label_index(e.face_b));

  std::vector<double> z(externals);
  z.resize(ne + L, 0.0);
  auto weight = [&] {
    double w = 1;
    for (auto [a, b] : lab)
      w /= 1 + z[a] + z[b];
    return w;
  };
  if (L == 0)
    return weight();

  const std::size_t n = rule.size();
  std::vector<double> inner(n), outer(n);
  if (L == 1) {
    for (std::size_t j = 0; j < n; ++j) {
      z[ne] = rule.q[j];
      inner[j] = weight();
    }
    return kernels::dot(inner.data(), rule.wq.data(), n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    z[ne] = rule.q[i];
    for (std::size_t j = 0; j < n; ++j) {
      z[ne + 1] = rule.q[j];
      inner[j] = weight();
    }
    outer[i] = kernels::dot(inner.data(), rule.wq.data(), n);
  }
  return kernels::dot(outer.data(), rule.wq.data(), n);
}

} // namespace

AmplitudeValue amplitude_checked(const RibbonGraph &g, const std::vector<double> &externals,
                                 const AmplitudeConfig &cfg) {
  if (externals.size() != g.external_faces().size())
    throw std::invalid_argument("amplitude: expected " + std::to_string(g.external_faces().size()) +
                                " external labels, got " + std::to_string(externals.size()));
  for (double p : externals)
    if (!(p >= 0) || !std::isfinite(p))
      throw std::invalid_argument("amplitude: external labels must be finite and nonnegative");
  if (g.internal_faces().size() > 2)
    throw std::invalid_argument("amplitude: at most two internal faces are supported");

  if (g.internal_faces().empty()) {
    double v = integrate_graph(g, externals, quad::Rule{});
    return {v, 0.0};
  }
  quad::Rule coarse = quad::make_rule(cfg.panels, cfg.points, cfg.ratio);
  quad::Rule fine = quad::refine(coarse);
  double c = integrate_graph(g, externals, coarse);
  double f = integrate_graph(g, externals, fine);
  double err = std::abs(f - c);
  if (!std::isfinite(f) || err > cfg.tolerance * std::abs(f))
    throw ConvergenceError("amplitude: doubling check failed, relative change " +
                           std::to_string(err / std::abs(f)) + " exceeds " +
                           std::to_string(cfg.tolerance));
  return {f, err};
}

double amplitude(const RibbonGraph &g, const std::vector<double> &externals, const AmplitudeConfig &cfg) {
  return amplitude_checked(g, externals, cfg).value;
}

// ---------------------------------------------------------------------------
// enumeration

namespace {

// Bare map data before colouring: sigma, alpha and which half-edges sit on a
// white vertex.
struct Map {
  std::vector<int> sigma, alpha;
  std::vector<char> white;
};

std::vector<int> bfs_order(const Map &m, int root) {
  const int H = int(m.alpha.size());
  std::vector<int> order, index(H, -1);
  order.reserve(H);
  order.push_back(root);
  index[root] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    int h = order[k];
    for (int nb : {m.sigma[h], m.alpha[h]})
      if (index[nb] < 0) {
        index[nb] = int(order.size());
        order.push_back(nb);
      }
  }
  return order;
}

std::vector<int> code_of(const Map &m, int root) {
  auto order = bfs_order(m, root);
  std::vector<int> index(m.alpha.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k)
    index[order[k]] = int(k);
  std::vector<int> code;
  code.reserve(3 * order.size());
  for (int h : order) {
    code.push_back(index[m.sigma[h]]);
    code.push_back(index[m.alpha[h]]);
    code.push_back(m.white[h]);
  }
  return code;
}

// Vertices as sigma cycles, in order of their smallest half-edge.
std::vector<std::vector<int>> cycles(const std::vector<int> &sigma) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(sigma.size(), 0);
  for (std::size_t h = 0; h < sigma.size(); ++h) {
    if (seen[h])
      continue;
    std::vector<int> c;
    for (int x = int(h); !seen[x]; x = sigma[x]) {
      seen[x] = 1;
      c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Brute force over the colours of the non-leg edges. Returns the number of
// admissible colourings and stores the first one in `first`.
int colourings(const Map &m, const std::vector<int> &colour_in, std::vector<int> &first) {
  const int H = int(m.alpha.size());
  std::vector<int> free_edges;
  for (int h = 0; h < H; ++h)
    if (h < m.alpha[h] && !m.white[h] && !m.white[m.alpha[h]])
      free_edges.push_back(h);
  std::vector<std::vector<int>> black;
  for (auto &c : cycles(m.sigma))
    if (!m.white[c[0]])
      black.push_back(c);

  std::vector<int> colour(colour_in);
  int count = 0, total = 1;
  for (std::size_t i = 0; i < free_edges.size(); ++i)
    total *= 3;
  for (int code = 0; code < total; ++code) {
    int c = code;
    for (int h : free_edges) {
      colour[h] = colour[m.alpha[h]] = 1 + c % 3;
      c /= 3;
    }
    bool ok = true;
    for (const auto &v : black) {
      int mask = 0;
      for (int h : v)
        mask |= 1 << colour[h];
      if (mask != 0b1110) {
        ok = false;
        break;
      }
    }
    if (ok && count++ == 0)
      first = colour;
  }
  return count;
}

Map map_of(const RibbonGraph &g) {
  Map m{g.sigma(), g.alpha(), std::vector<char>(g.alpha().size())};
  for (int h = 0; h < g.half_edge_count(); ++h)
    m.white[h] = g.vertices()[g.vertex_of(h)].kind == VertexKind::external;
  return m;
}

// Relabel half-edges in canonical order, rotating each vertex to start at
// its smallest new label.
RibbonGraph canonical_graph(const Map &m, const std::vector<int> &colour, int root) {
  auto order = bfs_order(m, root);
  const int H = int(order.size());
  std::vector<int> index(H);
  for (int k = 0; k < H; ++k)
    index[order[k]] = k;
  std::vector<int> sigma(H), alpha(H), col(H);
  std::vector<char> white(H);
  for (int k = 0; k < H; ++k) {
    int h = order[k];
    sigma[k] = index[m.sigma[h]];
    alpha[k] = index[m.alpha[h]];
    col[k] = colour[h];
    white[k] = m.white[h];
  }
  std::vector<Vertex> vs;
  for (auto &c : cycles(sigma))
    vs.push_back({white[c[0]] ? VertexKind::external : VertexKind::internal, c});
  return RibbonGraph(std::move(vs), std::move(alpha), std::move(col));
}

void matchings(std::vector<int> &alpha, const std::function<void()> &visit) {
  int first = -1;
  for (std::size_t h = 0; h < alpha.size(); ++h)
    if (alpha[h] < 0) {
      first = int(h);
      break;
    }
  if (first < 0) {
    visit();
    return;
  }
  for (std::size_t h = first + 1; h < alpha.size(); ++h) {
    if (alpha[h] >= 0)
      continue;
    alpha[first] = int(h);
    alpha[h] = first;
    matchings(alpha, visit);
    alpha[h] = alpha[first] = -1;
  }
}

} // namespace

std::vector<int> canonical_code(const RibbonGraph &g, int root) {
  if (root < 0 || root >= g.half_edge_count())
    throw std::out_of_range("canonical_code: root out of range");
  return code_of(map_of(g), root);
}

int count_colourings(const RibbonGraph &g) {
  std::vector<int> first;
  return colourings(map_of(g), g.colour(), first);
}

std::vector<GraphClass> enumerate_2pt(int n, int a1, int a2) {
  if (n < 1 || n > 2)
    throw std::invalid_argument("enumerate_2pt: order must be 1 or 2");
  if (a1 < 1 || a1 > 3 || a2 < 1 || a2 > 3)
    throw std::invalid_argument("enumerate_2pt: leg colours must be in 1..3");

  const int H = 2 + 6 * n;
  Map m;
  m.sigma.resize(H);
  m.white.assign(H, 0);
  m.sigma[0] = 1;
  m.sigma[1] = 0;
  m.white[0] = m.white[1] = 1;
  for (int v = 0; v < 2 * n; ++v) {
    int b = 2 + 3 * v;
    m.sigma[b] = b + 1;
    m.sigma[b + 1] = b + 2;
    m.sigma[b + 2] = b;
  }
  auto vertex = [](int h) { return h < 2 ? -1 : (h - 2) / 3; };

  std::map<std::vector<int>, std::vector<int>> topologies; // code -> alpha
  std::vector<int> alpha(H, -1), face, parent(2 * n + 1);
  matchings(alpha, [&] {
    if (alpha[0] == 1)
      return;
    for (int h = 2; h < H; ++h)
      if (vertex(alpha[h]) == vertex(h))
        return; // a loop at a black vertex repeats a colour
    std::iota(parent.begin(), parent.end(), 0);
    for (int h = 0; h < H; ++h)
      parent[find(parent, vertex(h) + 1)] = find(parent, vertex(alpha[h]) + 1);
    for (int v = 0; v <= 2 * n; ++v)
      if (find(parent, v) != find(parent, 0))
        return;
    int F = trace_faces(m.sigma, alpha, face);
    if (1 + 2 * n - H / 2 + F != 2 || face[0] == face[1])
      return;
    m.alpha = alpha;
    topologies.emplace(code_of(m, 0), alpha);
  });

  std::vector<GraphClass> out;
  for (auto &[code, al] : topologies) {
    m.alpha = al;
    std::vector<int> colour(H, 0), first;
    colour[0] = colour[al[0]] = a1;
    colour[1] = colour[al[1]] = a2;
    int s = colourings(m, colour, first);
    if (s == 0)
      continue;
    RibbonGraph rep = canonical_graph(m, first, 0);
    auto gamma = n == 2 ? identify(rep) : std::nullopt;
    std::string name = gamma ? gamma_name(*gamma) : (n == 1 ? "Loop" : "T" + std::to_string(out.size() + 1));
    out.push_back({std::move(rep), s, std::move(name), code, gamma});
  }
  std::stable_sort(out.begin(), out.end(), [](const GraphClass &a, const GraphClass &b) {
    int ka = a.gamma ? int(*a.gamma) : 99, kb = b.gamma ? int(*b.gamma) : 99;
    return ka < kb;
  });
  return out;
}

std::optional<Gamma> identify(const RibbonGraph &g) {
  if (g.boundary_count() != 1 || g.external_faces().size() != 2 || g.internal_vertex_count() != 4 ||
      g.internal_faces().size() != 2)
    return std::nullopt;
  int n12 = 0, nqq = 0, n1q = 0, n2q = 0;
  for (const auto &e : g.edges()) {
    int a = g.label_index(e.face_a), b = g.label_index(e.face_b);
    if (a > b)
      std::swap(a, b);
    if (a == 0 && b == 1)
      ++n12;
    else if (a >= 2)
      ++nqq;
    else if (a == 0)
      ++n1q;
    else
      ++n2q;
  }
  if (n12 == 3 && nqq == 0 && n1q == 2 && n2q == 2)
    return Gamma::g2;
  if (n12 == 2 && nqq == 1) {
    if (n1q == 2 && n2q == 2)
      return Gamma::g1;
    if (n1q == 3 && n2q == 1)
      return Gamma::g3;
    if (n1q == 1 && n2q == 3)
      return Gamma::g4;
  }
  return std::nullopt;
}

std::string gamma_name(Gamma g) { return "Gamma" + std::to_string(int(g)); }

double resum(const std::vector<GraphClass> &classes, double p1, double p2, const AmplitudeConfig &cfg) {
  if (classes.empty())
    return 0.0;
  int order = classes.front().representative.internal_vertex_count();
  double sum = 0;
  for (const auto &c : classes) {
    if (c.representative.internal_vertex_count() != order)
      throw std::invalid_argument("resum: classes of different order");
    sum += c.multiplicity * amplitude(c.representative, {p1, p2}, cfg);
  }
  return sum;
}

// ---------------------------------------------------------------------------
// closed forms

namespace {

using Q = detail::quad;
using C = detail::consts<Q>;
using detail::log1p_;

Q sq(Q x) { return x * x; }
Q li2m(Q p) { return detail::li2_t(-p); }

Q gamma1(Q a, Q b) {
  Q s = 1 + a + b, d = a - b, z2 = sq(C::pi) / 6;
  Q La = log1p_(a), Lb = log1p_(b);
  return (-sq(La) / (sq(d) * (1 + 2 * a)) - sq(Lb) / (sq(d) * (1 + 2 * b)) -
          (z2 - 2 * li2m(a)) / ((1 + 2 * a) * d * s) + (z2 - 2 * li2m(b)) / ((1 + 2 * b) * d * s) +
          2 * La * Lb / (sq(d) * s)) /
         sq(s);
}

Q gamma2(Q a, Q b) {
  Q s = 1 + a + b, d = a - b;
  Q L = log1p_((a - b) / (1 + b));
  return sq(L) / (s * sq(s) * sq(d));
}

Q gamma3(Q a, Q b) {
  Q s = 1 + a + b, d = a - b, z2 = sq(C::pi) / 6;
  Q La = log1p_(a), Lb = log1p_(b);
  Q A = z2 - sq(La) - li2m(a);
  return (-li2m(a) / (sq(1 + 2 * a) * s) - A / ((1 + 2 * a) * sq(d)) - A / (sq(1 + 2 * a) * d) +
          (z2 - Lb * La - li2m(b)) / (s * sq(d)) + La / (a * (1 + a) * (1 + 2 * a) * d)) /
         sq(s);
}

Q gamma4(Q a, Q b) {
  Q s = 1 + a + b, d = a - b, z2 = sq(C::pi) / 6;
  Q La = log1p_(a), Lb = log1p_(b);
  Q B = z2 - sq(Lb) - li2m(b);
  return (-li2m(b) / (sq(1 + 2 * b) * s) - B / ((1 + 2 * b) * sq(d)) + B / (sq(1 + 2 * b) * d) +
          (z2 - Lb * La - li2m(a)) / (s * sq(d)) - Lb / (b * (1 + b) * (1 + 2 * b) * d)) /
         sq(s);
}

} // namespace

double amplitude_closed(Gamma g, double p1, double p2) {
  if (!(p1 >= 0) || !(p2 >= 0) || !std::isfinite(p1) || !std::isfinite(p2))
    throw std::invalid_argument("amplitude_closed: momenta must be finite and nonnegative");
  detail::SafeOptions sym{false, true}, asym{true, false};
  switch (g) {
  case Gamma::g1:
    return double(detail::safe_eval(gamma1, p1, p2, sym));
  case Gamma::g2:
    return double(detail::safe_eval(gamma2, p1, p2, sym));
  case Gamma::g3:
    return double(detail::safe_eval(gamma3, p1, p2, asym));
  case Gamma::g4:
    return double(detail::safe_eval(gamma4, p1, p2, asym));
  }
  throw std::invalid_argument("amplitude_closed: unknown class");
}

// ---------------------------------------------------------------------------
// worked examples

RibbonGraph example_two_boundaries() {
  std::vector<Vertex> vs{{VertexKind::external, {0}},
                         {VertexKind::external, {1}},
                         {VertexKind::internal, {2, 3, 4}},
                         {VertexKind::internal, {5, 6, 7}}};
  std::vector<int> alpha{2, 5, 0, 6, 7, 1, 3, 4};
  std::vector<int> colour{1, 1, 1, 2, 3, 1, 2, 3};
  return RibbonGraph(vs, alpha, colour);
}

RibbonGraph example_bubble() {
  std::vector<Vertex> vs{{VertexKind::external, {0, 1}},
                         {VertexKind::internal, {2, 3, 4}},
                         {VertexKind::internal, {5, 6, 7}}};
  std::vector<int> alpha{2, 5, 0, 7, 6, 1, 4, 3};
  std::vector<int> colour{1, 1, 1, 2, 3, 1, 3, 2};
  return RibbonGraph(vs, alpha, colour);
}

RibbonGraph example_triangle() {
  std::vector<Vertex> vs{{VertexKind::external, {0, 1, 2}},
                         {VertexKind::internal, {3, 4, 5}},
                         {VertexKind::internal, {6, 7, 8}},
                         {VertexKind::internal, {9, 10, 11}}};
  std::vector<int> alpha{3, 6, 9, 0, 11, 7, 1, 5, 10, 2, 8, 4};
  std::vector<int> colour{1, 2, 3, 1, 2, 3, 2, 3, 1, 3, 1, 2};
  return RibbonGraph(vs, alpha, colour);
}

double example_two_boundaries_formula(double p1, double p2) {
  double s = 1 + p1 + p2;
  return 1 / (s * s * (1 + 2 * p1) * (1 + 2 * p2));
}

double example_bubble_formula(double p1, double p2) {
  double s = 1 + p1 + p2;
  return (std::log1p(p1) - std::log1p(p2)) / (s * s * (p1 - p2));
}

double example_triangle_formula(double p1, double p2, double p3) {
  double num = std::log1p(p1) / ((p1 - p2) * (p3 - p1)) + std::log1p(p2) / ((p2 - p1) * (p3 - p2)) +
               std::log1p(p3) / ((p3 - p1) * (p2 - p3));
  return num / ((1 + p1 + p2) * (1 + p2 + p3) * (1 + p1 + p3));
}

} // namespace colour3::ribbon
