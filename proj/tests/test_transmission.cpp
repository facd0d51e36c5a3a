// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"

#include "diracgraph/transmission.hpp"
#include "test_helpers.hpp"

using namespace diracgraph;

TEST_SUITE("transmission")
{
  TEST_CASE("local assembly: block placement in vertex order")
  {
    MetricGraph g = dgtest::example_graph();
    dgtest::Rng rng(201);
    Matrix a1 = rng.complex_matrix(1, 1), b1 = rng.complex_matrix(1, 1);
    Matrix a2 = rng.complex_matrix(3, 3), b2 = rng.complex_matrix(3, 3);
    Matrix a3 = rng.complex_matrix(2, 2), b3 = rng.complex_matrix(2, 2);

    // Blocks may be handed over in any order; assembly follows vertex order.
    GlobalConditions c = assemble_global(g, {{"v3", a3, b3}, {"v1", a1, b1}, {"v2", a2, b2}});
    CHECK(c.local);
    CHECK(c.block_vertices == std::vector<VertexId>{"v1", "v2", "v3"});
    CHECK(c.block_offsets == std::vector<int>{0, 1, 4});
    CHECK(c.block_sizes == std::vector<int>{1, 3, 2});
    CHECK(c.W == build_W(g));

    Matrix expected_a = Matrix::Zero(6, 6);
    expected_a.block(0, 0, 1, 1) = a1;
    expected_a.block(1, 1, 3, 3) = a2;
    expected_a.block(4, 4, 2, 2) = a3;
    CHECK(dgtest::max_diff(c.A, expected_a) == 0.0);
    Matrix expected_b = Matrix::Zero(6, 6);
    expected_b.block(0, 0, 1, 1) = b1;
    expected_b.block(1, 1, 3, 3) = b2;
    expected_b.block(4, 4, 2, 2) = b3;
    CHECK(dgtest::max_diff(c.B, expected_b) == 0.0);
  }

  TEST_CASE("local assembly: errors")
  {
    MetricGraph g = dgtest::example_graph();
    Matrix i1 = Matrix::Identity(1, 1), i2 = Matrix::Identity(2, 2), i3 = Matrix::Identity(3, 3);
    // Missing vertex block.
    CHECK_THROWS_AS(assemble_global(g, {{"v1", i1, i1}, {"v2", i3, i3}}), ConditionError);
    // Duplicate block.
    CHECK_THROWS_AS(
        assemble_global(g, {{"v1", i1, i1}, {"v1", i1, i1}, {"v2", i3, i3}, {"v3", i2, i2}}),
        ConditionError);
    // Unknown vertex: surfaces as a graph lookup failure.
    CHECK_THROWS_AS(
        assemble_global(g, {{"v1", i1, i1}, {"v2", i3, i3}, {"v3", i2, i2}, {"v9", i1, i1}}),
        GraphError);
    // Block size != deg v.
    CHECK_THROWS_AS(assemble_global(g, {{"v1", i1, i1}, {"v2", i2, i2}, {"v3", i2, i2}}),
                    ConditionError);
    // Non-square block.
    Matrix rect = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(assemble_global(g, {{"v1", i1, i1}, {"v2", i3, i3}, {"v3", rect, rect}}),
                    ConditionError);
  }

  TEST_CASE("global (non-local) conditions")
  {
    MetricGraph g = dgtest::example_graph();
    dgtest::Rng rng(202);
    Matrix a = rng.complex_matrix(6, 6), b = rng.complex_matrix(6, 6);
    GlobalConditions c = make_global(g, a, b);
    CHECK_FALSE(c.local);
    CHECK(dgtest::max_diff(c.A, a) == 0.0);
    CHECK(c.W == build_W(g));
    CHECK_THROWS_AS(make_global(g, Matrix::Identity(5, 5), Matrix::Identity(5, 5)),
                    ConditionError);
  }

  TEST_CASE("self-adjointness: Cayley pairs, reference pair, broken pairs")
  {
    dgtest::Rng rng(203);

    SUBCASE("A = U + I, B = i(U - I) is self-adjoint for any unitary U")
    {
      for (int t = 0; t < 5; ++t)
      {
        MetricGraph g = dgtest::example_graph();
        auto [a, b] = dgtest::cayley_pair(rng.unitary(6));
        CHECK(is_self_adjoint(make_global(g, a, b)).self_adjoint);
      }
    }

    SUBCASE("per-vertex verdicts for local conditions")
    {
      MetricGraph g = dgtest::example_graph();
      auto [a1, b1] = dgtest::cayley_pair(rng.unitary(1));
      auto [a2, b2] = dgtest::cayley_pair(rng.unitary(3));
      // v3 block violates AB* = BA*.
      Matrix a3 = Matrix::Identity(2, 2);
      Matrix b3 = Complex(0, 1) * Matrix::Identity(2, 2);
      auto rep = is_self_adjoint(assemble_global(g, {{"v1", a1, b1}, {"v2", a2, b2}, {"v3", a3, b3}}));
      CHECK_FALSE(rep.self_adjoint);
      REQUIRE(rep.per_vertex.size() == 3);
      CHECK(rep.per_vertex[0].second);
      CHECK(rep.per_vertex[1].second);
      CHECK_FALSE(rep.per_vertex[2].second);
    }

    SUBCASE("the reference conditions (I, 0) are self-adjoint")
    {
      MetricGraph g = dgtest::interval_graph(1.0);
      CHECK(is_self_adjoint(make_global(g, Matrix::Identity(2, 2), Matrix::Zero(2, 2)))
                .self_adjoint);
      CHECK(is_self_adjoint(make_global(g, Matrix::Zero(2, 2), Matrix::Identity(2, 2)))
                .self_adjoint);
    }

    SUBCASE("rank-deficient pairs are never self-adjoint")
    {
      MetricGraph g = dgtest::interval_graph(1.0);
      Matrix a = Matrix::Zero(2, 2);
      a(0, 0) = 1.0;
      CHECK_FALSE(is_self_adjoint(make_global(g, a, Matrix::Zero(2, 2))).self_adjoint);
    }
  }

  TEST_CASE("relation subspace: dimension and containment")
  {
    dgtest::Rng rng(204);
    // Generic invertible pair: the relation is the graph of B⁻¹A, dim N.
    Matrix a = rng.complex_matrix(4, 4), b = rng.complex_matrix(4, 4);
    Matrix k = relation_subspace(a, b);
    CHECK(k.cols() == 4);
    CHECK(dgtest::max_abs(a * k.topRows(4) - b * k.bottomRows(4)) <= 1e-12);
    // Orthonormal columns.
    CHECK(dgtest::max_diff(k.adjoint() * k, Matrix::Identity(4, 4)) <= 1e-12);

    // (I, 0): the relation is {0} ⊕ C^N.
    Matrix k0 = relation_subspace(Matrix::Identity(3, 3), Matrix::Zero(3, 3));
    CHECK(k0.cols() == 3);
    CHECK(dgtest::max_abs(k0.topRows(3)) <= 1e-12);

    // Rank-deficient pair: dimension exceeds N.
    Matrix az = Matrix::Zero(2, 2);
    az(0, 0) = 1.0;
    CHECK(relation_subspace(az, Matrix::Zero(2, 2)).cols() == 3);
  }

  TEST_CASE("relation equality: invariance under row operations")
  {
    dgtest::Rng rng(205);
    Matrix a = rng.complex_matrix(4, 4), b = rng.complex_matrix(4, 4);
    Matrix gmul = rng.complex_matrix(4, 4);  // generically invertible
    CHECK(relations_equal(a, b, gmul * a, gmul * b));
    CHECK(relations_equal(a, b, Complex(0, 2) * a, Complex(0, 2) * b));
    // Swapping the pair defines a different relation in general.
    CHECK_FALSE(relations_equal(a, b, b, a));
    CHECK_FALSE(relations_equal(a, b, a, 2.0 * b));
  }

  TEST_CASE("adjoint relation: self-adjoint pair reproduces its own subspace")
  {
    dgtest::Rng rng(206);
    auto [a, b] = dgtest::cayley_pair(rng.unitary(4));
    Matrix k = relation_subspace(a, b);
    Matrix kadj = detail::adjoint_relation_subspace(k);
    CHECK(kadj.cols() == k.cols());
    CHECK(detail::subspace_angle_sine(k, kadj) <= 1e-10);

    // Non-self-adjoint pair: the adjoint relation differs.
    Matrix a2 = Matrix::Identity(4, 4), b2 = Complex(0, 1) * Matrix::Identity(4, 4);
    Matrix k2 = relation_subspace(a2, b2);
    CHECK(detail::subspace_angle_sine(k2, detail::adjoint_relation_subspace(k2)) > 1e-3);
  }

  TEST_CASE("rank deficiency")
  {
    dgtest::Rng rng(207);
    Matrix a = rng.complex_matrix(4, 4), b = rng.complex_matrix(4, 4);
    auto full = rank_deficiency(a, b);
    CHECK(full.full);
    CHECK(full.rank == 4);

    a.row(2).setZero();
    b.row(2).setZero();
    auto def = rank_deficiency(a, b);
    CHECK_FALSE(def.full);
    CHECK(def.rank == 3);

    auto zero = rank_deficiency(Matrix::Zero(3, 3), Matrix::Zero(3, 3));
    CHECK(zero.rank == 0);
  }
}
