// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/transmission.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/SVD>

namespace diracgraph
{

namespace
{

constexpr double kRankTol = 1e-10;
constexpr double kAngleTol = 1e-8;

double condition_scale(const Matrix &A, const Matrix &B)
{
  return std::max({A.norm(), B.norm(), 1.0});
}

int svd_rank(const Eigen::VectorXd &sv, double rel_tol)
{
  if (sv.size() == 0 || sv(0) <= 0.0)
  {
    return 0;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); i++)
  {
    rank += (sv(i) > rel_tol * sv(0));
  }
  return rank;
}

// Matrix-level self-adjointness test with a borderline flag for the
// subspace cross-check.
struct MatrixVerdict
{
  bool ok;
  bool borderline;
};

MatrixVerdict self_adjoint_matrix_test(const Matrix &A, const Matrix &B)
{
  const double sc = condition_scale(A, B);
  const double herm = (A * B.adjoint() - B * A.adjoint()).norm();
  const double herm_tol = kRankTol * sc * sc;
  Matrix ab(A.rows(), A.cols() + B.cols());
  ab << A, B;
  Eigen::JacobiSVD<Matrix> svd(ab);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  const double rank_tol = kRankTol * sc;
  const bool ok = herm < herm_tol && smin > rank_tol;
  const bool borderline = (herm > 0.1 * herm_tol && herm < 10.0 * herm_tol) ||
                          (smin > 0.1 * rank_tol && smin < 10.0 * rank_tol);
  return {ok, borderline};
}

bool self_adjoint_subspace_test(const Matrix &A, const Matrix &B)
{
  const Matrix k = relation_subspace(A, B);
  if (k.cols() != A.rows())
  {
    return false;  // dim Λ ≠ N: cannot equal its adjoint
  }
  const Matrix kadj = detail::adjoint_relation_subspace(k);
  return k.cols() == kadj.cols() && detail::subspace_angle_sine(k, kadj) < kAngleTol;
}

bool self_adjoint_pair(const Matrix &A, const Matrix &B)
{
  const MatrixVerdict mv = self_adjoint_matrix_test(A, B);
  if (mv.borderline)
  {
    return self_adjoint_subspace_test(A, B);
  }
  return mv.ok;
}

}  // namespace

GlobalConditions assemble_global(const MetricGraph &g, const std::vector<VertexConditions> &blocks)
{
  std::map<VertexId, const VertexConditions *> by_vertex;
  for (const VertexConditions &vc : blocks)
  {
    if (!by_vertex.emplace(vc.vertex, &vc).second)
    {
      throw ConditionError("DuplicateVertexBlock: vertex '" + vc.vertex + "' has two condition blocks");
    }
  }
  for (const auto &[v, vc] : by_vertex)
  {
    g.vertex_index(v);  // throws on unknown vertex
  }

  const int n = g.boundary_dim();
  Matrix A = Matrix::Zero(n, n);
  Matrix B = Matrix::Zero(n, n);
  std::vector<VertexId> block_vertices;
  std::vector<int> offsets, sizes;
  int off = 0;
  for (const VertexId &v : g.vertices())
  {
    auto it = by_vertex.find(v);
    if (it == by_vertex.end())
    {
      throw ConditionError("MissingVertex: no condition block for vertex '" + v + "'");
    }
    const VertexConditions &vc = *it->second;
    const int d = g.degree(v);
    if (vc.A.rows() != d || vc.A.cols() != d || vc.B.rows() != d || vc.B.cols() != d)
    {
      throw ConditionError("SizeMismatch: block at vertex '" + v + "' must be " + std::to_string(d) +
                           "×" + std::to_string(d));
    }
    A.block(off, off, d, d) = vc.A;
    B.block(off, off, d, d) = vc.B;
    block_vertices.push_back(v);
    offsets.push_back(off);
    sizes.push_back(d);
    off += d;
  }
  return GlobalConditions{std::move(A), std::move(B), build_W(g), true,
                          std::move(block_vertices), std::move(offsets), std::move(sizes)};
}

GlobalConditions make_global(const MetricGraph &g, Matrix A, Matrix B)
{
  const int n = g.boundary_dim();
  if (A.rows() != n || A.cols() != n || B.rows() != n || B.cols() != n)
  {
    throw ConditionError("SizeMismatch: global conditions must be " + std::to_string(n) + "×" +
                         std::to_string(n));
  }
  return GlobalConditions{std::move(A), std::move(B), build_W(g), false, {}, {}, {}};
}

SelfAdjointnessReport is_self_adjoint(const GlobalConditions &c)
{
  SelfAdjointnessReport report;
  report.self_adjoint = self_adjoint_pair(c.A, c.B);
  if (c.local)
  {
    for (size_t i = 0; i < c.block_vertices.size(); i++)
    {
      const int off = c.block_offsets[i];
      const int d = c.block_sizes[i];
      const Matrix av = c.A.block(off, off, d, d);
      const Matrix bv = c.B.block(off, off, d, d);
      report.per_vertex.emplace_back(c.block_vertices[i], self_adjoint_pair(av, bv));
    }
  }
  return report;
}

Matrix relation_subspace(const Matrix &A, const Matrix &B)
{
  Matrix c(A.rows(), A.cols() + B.cols());
  c << A, -B;
  return detail::kernel_basis(c);
}

bool relations_equal(const Matrix &A, const Matrix &B, const Matrix &A2, const Matrix &B2)
{
  const Matrix u = relation_subspace(A, B);
  const Matrix v = relation_subspace(A2, B2);
  return u.cols() == v.cols() && detail::subspace_angle_sine(u, v) < kAngleTol;
}

RankReport rank_deficiency(const Matrix &A, const Matrix &B)
{
  Matrix ab(A.rows(), A.cols() + B.cols());
  ab << A, B;
  Eigen::JacobiSVD<Matrix> svd(ab);
  const int rank = svd_rank(svd.singularValues(), kRankTol);
  return {rank == A.rows(), rank};
}

namespace detail
{

Matrix kernel_basis(const Matrix &M)
{
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const int rank = svd_rank(svd.singularValues(), kRankTol);
  return svd.matrixV().rightCols(M.cols() - rank);
}

double subspace_angle_sine(const Matrix &U, const Matrix &V)
{
  if (U.cols() != V.cols())
  {
    return 1.0;
  }
  if (U.cols() == 0)
  {
    return 0.0;
  }
  const Matrix rv = V - U * (U.adjoint() * V);
  const Matrix ru = U - V * (V.adjoint() * U);
  Eigen::JacobiSVD<Matrix> sv(rv);
  Eigen::JacobiSVD<Matrix> su(ru);
  return std::max(sv.singularValues()(0), su.singularValues()(0));
}

Matrix adjoint_relation_subspace(const Matrix &K)
{
  const Eigen::Index n = K.rows() / 2;
  Matrix flip(K.cols(), 2 * n);
  flip << K.bottomRows(n).adjoint(), -K.topRows(n).adjoint();
  return kernel_basis(flip);
}

}  // namespace detail

}  // namespace diracgraph
