#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Planar 3-coloured ribbon graphs with boundary, as combinatorial maps.
//
// Half-edges are numbered 0..H-1. Each vertex lists its half-edges in
// counter-clockwise (sigma) order; alpha pairs the two half-edges of an
// edge. Faces are the orbits of phi = sigma o alpha. The face of half-edge h
// holds the corner between sigma^-1(h) and h, and the edge {h, alpha(h)}
// separates face(h) from face(alpha(h)).
//
// A white vertex with half-edges h_1..h_N is a corner of the external faces
// face(h_1)..face(h_N), labelled p_1..p_N in that order, so the edge at h_i
// separates p_i from p_{i+1}. All other faces are internal and integrated.

namespace colour3::ribbon {

enum class VertexKind { internal, external };

struct Vertex {
  VertexKind kind = VertexKind::internal;
  std::vector<int> half_edges; // cyclic order
};

struct Edge {
  int h = 0, mate = 0; // h < mate
  int colour = 0;      // 1..3
  int face_a = 0, face_b = 0;
};

class InvalidGraph : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class RibbonGraph {
public:
  // colour[h] is the colour of the edge holding h; it must agree on both
  // half-edges. Throws InvalidGraph unless the graph satisfies every rule.
  RibbonGraph(std::vector<Vertex> vertices, std::vector<int> alpha, std::vector<int> colour);

  const std::vector<Vertex> &vertices() const { return vertices_; }
  const std::vector<int> &alpha() const { return alpha_; }
  const std::vector<int> &sigma() const { return sigma_; }
  const std::vector<int> &colour() const { return colour_; }
  const std::vector<int> &face_of() const { return face_; }
  const std::vector<Edge> &edges() const { return edges_; }
  int vertex_of(int h) const { return vertex_[h]; }

  int half_edge_count() const { return int(alpha_.size()); }
  int face_count() const { return faces_; }
  int boundary_count() const; // B, the number of white vertices
  int internal_vertex_count() const;
  int euler_characteristic() const;

  // Faces in label order: external faces p_1.. (white vertices in order),
  // then internal faces q_1.. by first half-edge.
  const std::vector<int> &external_faces() const { return external_; }
  const std::vector<int> &internal_faces() const { return internal_; }
  // position of a face among the amplitude labels: externals first
  int label_index(int face) const { return label_[face]; }

private:
  std::vector<Vertex> vertices_;
  std::vector<int> alpha_, sigma_, colour_, vertex_, face_;
  std::vector<Edge> edges_;
  std::vector<int> external_, internal_, label_;
  int faces_ = 0;
};

// Face orbits of sigma o alpha; returns the face count and fills face[h].
int trace_faces(const std::vector<int> &sigma, const std::vector<int> &alpha, std::vector<int> &face);

class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct AmplitudeConfig {
  int panels = 40;
  int points = 16;
  double ratio = 2.0;
  double tolerance = 1e-6; // relative doubling-check bound
};

struct AmplitudeValue {
  double value = 0;
  double error = 0; // |fine - coarse| of the doubling check
};

// Product of edge weights 1/(1+z1+z2) integrated over the internal faces
// (at most two) on [0, inf), without powers of lambda. `externals` holds one
// label per external face. Throws ConvergenceError when the doubling check
// exceeds the tolerance.
AmplitudeValue amplitude_checked(const RibbonGraph &g, const std::vector<double> &externals,
                                 const AmplitudeConfig &cfg = {});
double amplitude(const RibbonGraph &g, const std::vector<double> &externals,
                 const AmplitudeConfig &cfg = {});

// The order-2 two-point topologies.
enum class Gamma { g1 = 1, g2, g3, g4 };

struct GraphClass {
  RibbonGraph representative;
  int multiplicity = 0; // s: admissible colourings of the internal edges
  std::string name;
  std::vector<int> code; // canonical rooted encoding
  std::optional<Gamma> gamma;
};

// Rooted canonical encoding: breadth-first relabelling from `root` through
// sigma and alpha. Two rooted maps are isomorphic iff their codes agree.
std::vector<int> canonical_code(const RibbonGraph &g, int root);

// Number of colourings of the non-leg edges with every internal vertex
// carrying all three colours; legs (edges at a white vertex) keep their
// colour.
int count_colourings(const RibbonGraph &g);

// All classes of planar two-point graphs with 2n internal vertices, one white
// vertex of valence 2 and leg colours (a1, a2). Classes without an admissible
// colouring are dropped, so mixed leg colours give an empty list.
std::vector<GraphClass> enumerate_2pt(int n, int a1 = 1, int a2 = 1);

std::optional<Gamma> identify(const RibbonGraph &g);
std::string gamma_name(Gamma g);

double resum(const std::vector<GraphClass> &classes, double p1, double p2,
             const AmplitudeConfig &cfg = {});

// Closed amplitudes of the four order-2 topologies, diagonal and zero
// momentum included.
double amplitude_closed(Gamma g, double p1, double p2);

// The three single-graph examples: two boundaries joined through a bubble,
// the one-loop self-energy, and the triangle with three external faces.
RibbonGraph example_two_boundaries();
RibbonGraph example_bubble();
RibbonGraph example_triangle();

double example_two_boundaries_formula(double p1, double p2);
double example_bubble_formula(double p1, double p2);
double example_triangle_formula(double p1, double p2, double p3);

} // namespace colour3::ribbon
