// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace diracgraph
{

Permutation::Permutation(std::vector<int> col_of_row) : col_of_row_(std::move(col_of_row))
{
  const int n = static_cast<int>(col_of_row_.size());
  row_of_col_.assign(n, -1);
  for (int r = 0; r < n; r++)
  {
    const int c = col_of_row_[r];
    if (c < 0 || c >= n || row_of_col_[c] != -1)
    {
      throw GraphError("Permutation: image list is not a permutation of 0..n-1");
    }
    row_of_col_[c] = r;
  }
}

Permutation Permutation::Identity(int n)
{
  std::vector<int> id(n);
  for (int i = 0; i < n; i++)
  {
    id[i] = i;
  }
  return Permutation(std::move(id));
}

int Permutation::sign() const
{
  // Parity via cycle decomposition: sign = (−1)^(n − #cycles).
  const int n = size();
  std::vector<bool> seen(n, false);
  int cycles = 0;
  for (int i = 0; i < n; i++)
  {
    if (seen[i])
    {
      continue;
    }
    cycles++;
    for (int j = i; !seen[j]; j = col_of_row_[j])
    {
      seen[j] = true;
    }
  }
  return ((n - cycles) % 2 == 0) ? 1 : -1;
}

IntMatrix Permutation::dense() const
{
  const int n = size();
  IntMatrix w = IntMatrix::Zero(n, n);
  for (int r = 0; r < n; r++)
  {
    w(r, col_of_row_[r]) = 1;
  }
  return w;
}

Matrix Permutation::left_apply(const Matrix &q) const
{
  Matrix out(q.rows(), q.cols());
  for (int r = 0; r < size(); r++)
  {
    out.row(r) = q.row(col_of_row_[r]);
  }
  return out;
}

Matrix Permutation::right_apply(const Matrix &a) const
{
  Matrix out(a.rows(), a.cols());
  for (int c = 0; c < size(); c++)
  {
    out.col(c) = a.col(row_of_col_[c]);
  }
  return out;
}

Vector Permutation::apply(const Vector &x) const
{
  Vector out(size());
  for (int r = 0; r < size(); r++)
  {
    out(r) = x(col_of_row_[r]);
  }
  return out;
}

Vector Permutation::apply_inverse(const Vector &y) const
{
  Vector out(size());
  for (int c = 0; c < size(); c++)
  {
    out(c) = y(row_of_col_[c]);
  }
  return out;
}

Vector Permutation::conjugate_diagonal(const Vector &d) const
{
  Vector out(size());
  for (int r = 0; r < size(); r++)
  {
    out(r) = d(col_of_row_[r]);
  }
  return out;
}

Permutation Permutation::operator*(const Permutation &other) const
{
  if (size() != other.size())
  {
    throw GraphError("Permutation: size mismatch in composition");
  }
  std::vector<int> img(size());
  for (int r = 0; r < size(); r++)
  {
    img[r] = other.col_of_row_[col_of_row_[r]];
  }
  return Permutation(std::move(img));
}

MetricGraph::MetricGraph(std::vector<VertexId> vertices, std::vector<Edge> edges, double mass)
  : vertices_(std::move(vertices)), edges_(std::move(edges)), mass_(mass)
{
  if (vertices_.empty())
  {
    throw GraphError("EmptyGraph: a metric graph needs a non-empty vertex set");
  }
  if (!(mass_ >= 0.0) || !std::isfinite(mass_))
  {
    throw GraphError("BadMass: mass must be a finite real ≥ 0");
  }
  for (int v = 0; v < num_vertices(); v++)
  {
    if (!vertex_index_.emplace(vertices_[v], v).second)
    {
      throw GraphError("DuplicateVertexId: vertex '" + vertices_[v] + "' listed twice");
    }
  }

  slot_offset_.resize(edges_.size());
  for (int j = 0; j < num_edges(); j++)
  {
    const Edge &e = edges_[j];
    if (!edge_position_.emplace(edge_id(e), j).second)
    {
      throw GraphError("DuplicateEdgeId: edge '" + edge_id(e) + "' listed twice");
    }
    slot_offset_[j] = boundary_dim_;
    if (is_internal(e))
    {
      const auto &ie = std::get<InternalEdge>(e);
      if (!vertex_index_.count(ie.from) || !vertex_index_.count(ie.to))
      {
        throw GraphError("UnknownVertex: edge '" + ie.id + "' references a vertex not in the vertex list");
      }
      if (ie.from == ie.to)
      {
        throw GraphError("LoopEdge: edge '" + ie.id +
                         "' starts and ends at the same vertex; split it by inserting an extra vertex");
      }
      if (!(ie.a < ie.b) || !std::isfinite(ie.a) || !std::isfinite(ie.b))
      {
        throw GraphError("BadInterval: edge '" + ie.id + "' needs a finite interval with a < b");
      }
      num_internal_++;
      boundary_dim_ += 2;
    }
    else
    {
      const auto &xe = std::get<ExternalEdge>(e);
      if (!vertex_index_.count(xe.vertex))
      {
        throw GraphError("UnknownVertex: edge '" + xe.id + "' references a vertex not in the vertex list");
      }
      if (xe.rho != -1 && xe.rho != 1)
      {
        throw GraphError("BadOrientation: edge '" + xe.id + "' needs rho = −1 (outgoing) or +1 (incoming)");
      }
      if (!std::isfinite(xe.endpoint))
      {
        throw GraphError("BadInterval: edge '" + xe.id + "' needs a finite endpoint");
      }
      boundary_dim_ += 1;
    }
  }

  for (const VertexId &v : vertices_)
  {
    if (degree(v) == 0)
    {
      throw GraphError("IsolatedVertex: vertex '" + v + "' has no incident edges");
    }
  }
}

int MetricGraph::vertex_index(const VertexId &v) const
{
  auto it = vertex_index_.find(v);
  if (it == vertex_index_.end())
  {
    throw GraphError("UnknownVertex: '" + v + "'");
  }
  return it->second;
}

int MetricGraph::edge_position(const EdgeId &id) const
{
  auto it = edge_position_.find(id);
  if (it == edge_position_.end())
  {
    throw GraphError("UnknownEdge: '" + id + "'");
  }
  return it->second;
}

int MetricGraph::degree(const VertexId &v) const
{
  int deg = 0;
  for (const Edge &e : edges_)
  {
    if (is_internal(e))
    {
      const auto &ie = std::get<InternalEdge>(e);
      deg += (ie.from == v) + (ie.to == v);
    }
    else
    {
      deg += (std::get<ExternalEdge>(e).vertex == v);
    }
  }
  return deg;
}

std::map<VertexId, int> MetricGraph::vertex_degrees() const
{
  std::map<VertexId, int> out;
  for (const VertexId &v : vertices_)
  {
    out[v] = degree(v);
  }
  return out;
}

IntMatrix MetricGraph::incidence_matrix() const
{
  IntMatrix g = IntMatrix::Zero(num_vertices(), num_edges());
  for (int j = 0; j < num_edges(); j++)
  {
    const Edge &e = edges_[j];
    if (is_internal(e))
    {
      const auto &ie = std::get<InternalEdge>(e);
      g(vertex_index_.at(ie.from), j) = -1;
      g(vertex_index_.at(ie.to), j) = 1;
    }
    else
    {
      const auto &xe = std::get<ExternalEdge>(e);
      g(vertex_index_.at(xe.vertex), j) = (xe.rho == 1) ? 1 : -1;
    }
  }
  return g;
}

std::vector<NumberingEntry> MetricGraph::edge_vertex_numbering() const
{
  std::vector<NumberingEntry> out;
  out.reserve(boundary_dim_);
  for (const Edge &e : edges_)
  {
    if (is_internal(e))
    {
      const auto &ie = std::get<InternalEdge>(e);
      out.push_back({ie.id, ie.from});
      out.push_back({ie.id, ie.to});
    }
    else
    {
      const auto &xe = std::get<ExternalEdge>(e);
      out.push_back({xe.id, xe.vertex});
    }
  }
  return out;
}

std::vector<NumberingEntry> MetricGraph::vertex_edge_numbering() const
{
  std::vector<NumberingEntry> out;
  out.reserve(boundary_dim_);
  for (const VertexId &v : vertices_)
  {
    for (const Edge &e : edges_)
    {
      if (is_internal(e))
      {
        const auto &ie = std::get<InternalEdge>(e);
        if (ie.from == v || ie.to == v)
        {
          out.push_back({ie.id, v});
        }
      }
      else
      {
        const auto &xe = std::get<ExternalEdge>(e);
        if (xe.vertex == v)
        {
          out.push_back({xe.id, v});
        }
      }
    }
  }
  return out;
}

Permutation build_W(const MetricGraph &g)
{
  const auto ev = g.edge_vertex_numbering();
  const auto ve = g.vertex_edge_numbering();
  std::map<std::pair<EdgeId, VertexId>, int> ev_slot;
  for (int m = 0; m < static_cast<int>(ev.size()); m++)
  {
    ev_slot[{ev[m].edge, ev[m].vertex}] = m;
  }
  std::vector<int> col_of_row(ve.size());
  for (int n = 0; n < static_cast<int>(ve.size()); n++)
  {
    col_of_row[n] = ev_slot.at({ve[n].edge, ve[n].vertex});
  }
  return Permutation(std::move(col_of_row));
}

FlipResult flip_orientation(const MetricGraph &g, const std::vector<EdgeId> &flipped)
{
  std::set<int> positions;
  for (const EdgeId &id : flipped)
  {
    positions.insert(g.edge_position(id));
  }

  std::vector<Edge> edges = g.edges();
  std::vector<int> s_img(g.boundary_dim());
  for (int i = 0; i < g.boundary_dim(); i++)
  {
    s_img[i] = i;
  }
  for (int j : positions)
  {
    Edge &e = edges[j];
    if (is_internal(e))
    {
      auto &ie = std::get<InternalEdge>(e);
      std::swap(ie.from, ie.to);
      const double a = ie.a, b = ie.b;
      ie.a = -b;
      ie.b = -a;
      const int off = g.slot_offset(j);
      std::swap(s_img[off], s_img[off + 1]);
    }
    else
    {
      auto &xe = std::get<ExternalEdge>(e);
      xe.rho = -xe.rho;
      xe.endpoint = -xe.endpoint;
    }
  }
  return {MetricGraph(g.vertices(), std::move(edges), g.mass()), Permutation(std::move(s_img))};
}

}  // namespace diracgraph
