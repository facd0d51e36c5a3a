// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "diracgraph/graph.hpp"
#include "diracgraph/types.hpp"

namespace diracgraph
{

// Local transmission conditions at one vertex: square (deg v)×(deg v) pair.
struct VertexConditions
{
  VertexId vertex;
  Matrix A;
  Matrix B;
};

// Transmission conditions A·W·Γ¹Φ = B·W·Γ²Φ on the vertex space ℂ^N.
// When local, A and B are block-diagonal in the vertex-ordered basis with
// blocks of size deg v (offsets/sizes recorded per graph vertex order).
struct GlobalConditions
{
  Matrix A;
  Matrix B;
  Permutation W;
  bool local;
  std::vector<VertexId> block_vertices;
  std::vector<int> block_offsets;
  std::vector<int> block_sizes;
};

// Block-diagonal assembly of per-vertex conditions, in graph vertex order.
// Throws ConditionError on a missing/duplicate/unknown vertex block or a
// block size ≠ deg v.
GlobalConditions assemble_global(const MetricGraph &g, const std::vector<VertexConditions> &blocks);

// Non-local conditions: full N×N pair on the vertex space.
GlobalConditions make_global(const MetricGraph &g, Matrix A, Matrix B);

struct SelfAdjointnessReport
{
  bool self_adjoint;
  // Per-vertex verdicts (local conditions only, graph vertex order).
  std::vector<std::pair<VertexId, bool>> per_vertex;
};

// Self-adjointness of the induced operator: AB* = BA* and (A|B) of maximal
// rank. Borderline matrix verdicts are cross-checked through the relation
// subspace against its adjoint relation.
SelfAdjointnessReport is_self_adjoint(const GlobalConditions &c);

// Orthonormal basis (columns) of ker[A | −B] ⊂ ℂ^N ⊕ ℂ^N — the linear
// relation {(f, f′) : A f = B f′} as a subspace. Dimension is always ≥ N.
Matrix relation_subspace(const Matrix &A, const Matrix &B);

// True iff (A,B) and (A2,B2) represent the same relation: equal subspace
// dimensions and largest principal angle below 1e−8 (measured via its sine).
bool relations_equal(const Matrix &A, const Matrix &B, const Matrix &A2, const Matrix &B2);

struct RankReport
{
  bool full;
  int rank;
};

// Rank of the N×2N block row (A|B); a deficient rank makes the whole plane
// spectrum (Birman–Schwinger theorem, degenerate case).
RankReport rank_deficiency(const Matrix &A, const Matrix &B);

namespace detail
{

// Orthonormal kernel basis of an arbitrary matrix via SVD (relative
// singular-value threshold 1e−10).
Matrix kernel_basis(const Matrix &M);

// sin of the largest principal angle between the column spans of two
// orthonormal bases; returns 1 if the dimensions differ.
double subspace_angle_sine(const Matrix &U, const Matrix &V);

// Basis of the adjoint relation Λ* = {(g,g′) : ⟨f′,g⟩ = ⟨f,g′⟩ ∀(f,f′) ∈ Λ}
// from an orthonormal basis K = [K₁; K₂] of Λ.
Matrix adjoint_relation_subspace(const Matrix &K);

}  // namespace detail

}  // namespace diracgraph
