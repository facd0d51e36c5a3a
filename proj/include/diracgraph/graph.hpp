// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "diracgraph/errors.hpp"
#include "diracgraph/types.hpp"

namespace diracgraph
{

using VertexId = std::string;
using EdgeId = std::string;

// Internal edge: bounded interval (a, b), oriented from its initial vertex
// ∂₋ ("from") to its terminal vertex ∂₊ ("to"). Loops are prohibited.
struct InternalEdge
{
  EdgeId id;
  VertexId from;  // initial vertex ∂₋
  VertexId to;    // terminal vertex ∂₊
  double a;
  double b;

  double length() const { return b - a; }
};

// External edge: half-line attached to one vertex. Orientation map:
// rho = −1 for an outgoing edge with interval (endpoint, +∞) (vertex is ∂₋),
// rho = +1 for an incoming edge with interval (−∞, endpoint) (vertex is ∂₊).
struct ExternalEdge
{
  EdgeId id;
  VertexId vertex;
  int rho;
  double endpoint;
};

using Edge = std::variant<InternalEdge, ExternalEdge>;

inline bool is_internal(const Edge &e)
{
  return std::holds_alternative<InternalEdge>(e);
}
inline const EdgeId &edge_id(const Edge &e)
{
  return is_internal(e) ? std::get<InternalEdge>(e).id : std::get<ExternalEdge>(e).id;
}

// N×N permutation matrix stored as the column position of the single 1 in
// each row: W_{n,m} = 1 iff m = col_of_row(n).
class Permutation
{
public:
  explicit Permutation(std::vector<int> col_of_row);
  static Permutation Identity(int n);

  int size() const { return static_cast<int>(col_of_row_.size()); }
  int col_of_row(int n) const { return col_of_row_[n]; }
  int row_of_col(int m) const { return row_of_col_[m]; }

  // Determinant (signature) of the permutation, ±1.
  int sign() const;

  IntMatrix dense() const;

  // W·Q (permutes rows of Q).
  Matrix left_apply(const Matrix &q) const;
  // A·W (permutes columns of A).
  Matrix right_apply(const Matrix &a) const;
  // W·x and W⁻¹·y = Wᵀ·y on vectors.
  Vector apply(const Vector &x) const;
  Vector apply_inverse(const Vector &y) const;
  // W·D·W⁻¹ for a diagonal matrix given by its diagonal d (stays diagonal).
  Vector conjugate_diagonal(const Vector &d) const;

  // Composition (this ∘ other as matrix product this·other).
  Permutation operator*(const Permutation &other) const;
  bool operator==(const Permutation &other) const { return col_of_row_ == other.col_of_row_; }

private:
  std::vector<int> col_of_row_;
  std::vector<int> row_of_col_;
};

// One entry of an evaluation-point numbering: (edge, incident vertex).
struct NumberingEntry
{
  EdgeId edge;
  VertexId vertex;

  bool operator==(const NumberingEntry &other) const = default;
};

// Finite metric graph: ordered vertices; ordered edges (internal intervals
// and external half-lines, in one global insertion order); particle mass.
class MetricGraph
{
public:
  MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges, double mass);

  const std::vector<VertexId> &vertices() const { return vertices_; }
  const std::vector<Edge> &edges() const { return edges_; }
  double mass() const { return mass_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_internal() const { return num_internal_; }
  int num_external() const { return num_edges() - num_internal_; }

  // Dimension N = 2|I| + |E| of the boundary space.
  int boundary_dim() const { return boundary_dim_; }
  // First boundary slot of the edge at global position j (internal edges
  // occupy two consecutive slots, initial vertex first; external edges one).
  int slot_offset(int j) const { return slot_offset_[j]; }

  int vertex_index(const VertexId &v) const;
  int edge_position(const EdgeId &id) const;

  int degree(const VertexId &v) const;
  std::map<VertexId, int> vertex_degrees() const;

  // Incidence matrix G ∈ {−1,0,+1}^{|V|×|J|}: G_{v,j} = +1 if v = ∂₊j,
  // −1 if v = ∂₋j (edge columns in global edge order).
  IntMatrix incidence_matrix() const;

  // Edge-vertex numbering ν_G: edge order; an internal edge contributes its
  // initial vertex immediately followed by its terminal vertex.
  std::vector<NumberingEntry> edge_vertex_numbering() const;
  // Vertex-edge numbering ν_F: vertex order; within a vertex, incident edges
  // follow the global edge order (colexicographic order).
  std::vector<NumberingEntry> vertex_edge_numbering() const;

private:
  std::vector<VertexId> vertices_;
  std::vector<Edge> edges_;
  double mass_;
  int num_internal_ = 0;
  int boundary_dim_ = 0;
  std::vector<int> slot_offset_;
  std::map<VertexId, int> vertex_index_;
  std::map<EdgeId, int> edge_position_;
};

// The permutation W mapping edge-ordered boundary vectors to vertex-ordered
// ones: W_{n,m} = 1 iff vertex_edge_numbering[n] = edge_vertex_numbering[m].
Permutation build_W(const MetricGraph &g);

struct FlipResult
{
  MetricGraph graph;
  // Edge-ordered boundary permutation S with W̃ = W·S: σ₁ on the 2-block of
  // every flipped internal edge, identity elsewhere. S² = identity.
  Permutation S;
};

// Reverses the orientation of the listed edges: internal edges swap ∂₋/∂₊
// and re-anchor the interval to (−b,−a); external edges negate rho and the
// finite endpoint.
FlipResult flip_orientation(const MetricGraph &g, const std::vector<EdgeId> &flipped);

}  // namespace diracgraph
