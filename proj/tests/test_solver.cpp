// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <complex>

#include "doctest.h"

#include "diracgraph/edge_spectral.hpp"
#include "diracgraph/oracle.hpp"
#include "diracgraph/solver.hpp"
#include "diracgraph/star.hpp"
#include "test_helpers.hpp"

using namespace diracgraph;

namespace
{

const Complex kI(0.0, 1.0);

}  // namespace

TEST_SUITE("solver")
{
  TEST_CASE("assemble_Q: block layout matches the edge Q-functions")
  {
    MetricGraph g = dgtest::example_graph();
    dgtest::Rng rng(401);
    auto p = dgtest::global_problem(g, rng.complex_matrix(6, 6), rng.complex_matrix(6, 6));
    Complex z(0.4, 0.6);
    Matrix q = assemble_Q(p, z);
    REQUIRE(q.rows() == 6);

    Matrix expected = Matrix::Zero(6, 6);
    expected(0, 0) = q_external(z, 1.0);
    expected.block(1, 1, 2, 2) = q_internal(z, 1.0, 1.0);
    expected(3, 3) = q_external(z, 1.0);
    expected.block(4, 4, 2, 2) = q_internal(z, 1.0, 1.0);
    CHECK(dgtest::max_diff(q, expected) <= 1e-13);
    // Off-block entries vanish exactly.
    CHECK(std::abs(q(0, 1)) == 0.0);
    CHECK(std::abs(q(2, 4)) == 0.0);

    // Errors carry the offending edge id.
    try
    {
      assemble_Q(p, Complex(-1.0, 0.0));  // -m: internal reference point
      FAIL("expected ReferencePointError");
    }
    catch (const ReferencePointError &e)
    {
      CHECK(std::string(e.what()).find("j") != std::string::npos);
    }
  }

  TEST_CASE("characteristic matrix and function")
  {
    MetricGraph g = dgtest::example_graph();
    dgtest::Rng rng(402);
    Matrix a = rng.complex_matrix(6, 6), b = rng.complex_matrix(6, 6);
    auto p = dgtest::global_problem(g, a, b);
    Complex z(-0.2, 0.9);
    Matrix w = build_W(g).dense().cast<Complex>();
    Matrix expected = a * w - b * w * assemble_Q(p, z);
    CHECK(dgtest::max_diff(characteristic_matrix(p, z), expected) <= 1e-13);
    CHECK(std::abs(char_fn(p, z) - expected.determinant()) <=
          1e-10 * (1.0 + std::abs(expected.determinant())));
  }

  TEST_CASE("graph reference eigenvalues: union over internal edges")
  {
    MetricGraph g = dgtest::two_loop_graph(1.0);  // lengths 1.0 and 0.8
    auto refs = graph_reference_eigenvalues(g, 4.2);
    // {-1} ∪ {±sqrt(1+π²)} ∪ {±sqrt(1+π²/0.64)} restricted to [-4.2, 4.2].
    double r1 = std::sqrt(1.0 + M_PI * M_PI);
    double r2 = std::sqrt(1.0 + M_PI * M_PI / 0.64);
    REQUIRE(refs.size() == 5);
    CHECK(refs[0] == doctest::Approx(-r2).epsilon(1e-13));
    CHECK(refs[1] == doctest::Approx(-r1).epsilon(1e-13));
    CHECK(refs[2] == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(refs[3] == doctest::Approx(r1).epsilon(1e-13));
    CHECK(refs[4] == doctest::Approx(r2).epsilon(1e-13));
    // Star graphs contribute none.
    CHECK(graph_reference_eigenvalues(make_star_graph(3, 1.0), 10.0).empty());
  }

  TEST_CASE("interval with (0, I): the known eigenvalue at z = 1")
  {
    auto p = dgtest::global_problem(dgtest::interval_graph(1.0), Matrix::Zero(2, 2),
                                    Matrix::Identity(2, 2));
    auto report = find_eigenvalues(p, {0.5, 1.5, -0.5, 0.5}, 1e-10);
    CHECK(report.complete);
    CHECK(report.unresolved.empty());
    CHECK_FALSE(report.whole_plane);
    CHECK(report.essential.kind == EssentialSpectrumResult::Kind::kEmpty);
    CHECK(report.essential.certified);
    CHECK(report.unsearched.empty());
    CHECK(report.reference_points.empty());
    REQUIRE(report.eigenvalues.size() == 1);
    const auto &ev = report.eigenvalues[0];
    CHECK(std::abs(ev.z - Complex(1.0, 0.0)) < 1e-10);
    CHECK(ev.multiplicity == 1);
    CHECK(ev.residual < 1e-8);
    REQUIRE(ev.eigenfunctions.size() == 1);

    // The eigenfunction solves the equation on the edge.
    const auto &psi = ev.eigenfunctions[0].per_edge[0];
    CHECK(ode_residual(psi, ev.z, 1.0, 0.0, 1.0, 1e-3) <= 1e-4);
  }

  TEST_CASE("reference points inside the region are excised and checked")
  {
    MetricGraph g = dgtest::interval_graph(1.0);
    Rectangle region{-2.0, 0.0, -0.1, 0.1};

    SUBCASE("(I, 0) reproduces the decoupled operator: -1 is an eigenvalue")
    {
      auto p = dgtest::global_problem(g, Matrix::Identity(2, 2), Matrix::Zero(2, 2));
      auto report = find_eigenvalues(p, region, 1e-10);
      CHECK(report.complete);
      CHECK(report.eigenvalues.empty());  // F = det(W) never vanishes
      REQUIRE(report.reference_points.size() == 1);
      CHECK(report.reference_points[0].z0 == doctest::Approx(-1.0));
      CHECK(report.reference_points[0].eigenvalue);
      CHECK(report.reference_points[0].multiplicity == 1);
    }

    SUBCASE("(0, I): -1 is not an eigenvalue")
    {
      auto p = dgtest::global_problem(g, Matrix::Zero(2, 2), Matrix::Identity(2, 2));
      auto report = find_eigenvalues(p, region, 1e-10);
      CHECK(report.complete);
      CHECK(report.eigenvalues.empty());
      REQUIRE(report.reference_points.size() == 1);
      CHECK_FALSE(report.reference_points[0].eigenvalue);
    }
  }

  TEST_CASE("star: multiplicity-3 eigenvalue and closed-form agreement")
  {
    MetricGraph g = make_star_graph(3, 1.0);
    auto p = dgtest::global_problem(g, Matrix::Identity(3, 3), -2.0 * Matrix::Identity(3, 3));
    auto report = find_eigenvalues(p, {0.3, 0.9, -0.3, 0.3}, 1e-10);
    CHECK(report.complete);
    REQUIRE(report.eigenvalues.size() == 1);
    const auto &ev = report.eigenvalues[0];
    CHECK(std::abs(ev.z - Complex(0.6, 0.0)) < 1e-9);
    CHECK(ev.multiplicity == 3);
    CHECK(ev.eigenfunctions.size() == 3);
    CHECK(ev.residual < 1e-8);
    CHECK(report.essential.kind == EssentialSpectrumResult::Kind::kRays);
  }

  TEST_CASE("star: random complex conditions match the closed form off the axis")
  {
    for (std::uint64_t seed : {21u, 22u, 23u})
    {
      dgtest::Rng rng(seed);
      Matrix a = rng.complex_matrix(3, 3), b = rng.complex_matrix(3, 3);
      auto closed = star_point_spectrum(a, b, 1.0);
      MetricGraph g = make_star_graph(3, 1.0);
      auto p = dgtest::global_problem(g, a, b);
      Rectangle region{-0.95, 0.95, -1.8, 1.8};
      auto report = find_eigenvalues(p, region, 1e-10);
      CHECK(report.complete);

      std::vector<Complex> expected;
      for (std::size_t i = 0; i < closed.point_spectrum.size(); ++i)
        if (region.contains(closed.point_spectrum[i], -1e-6)) // strictly inside
          expected.push_back(closed.point_spectrum[i]);

      CAPTURE(seed);
      REQUIRE(report.eigenvalues.size() == expected.size());
      for (const auto &ev : report.eigenvalues)
      {
        double best = 1e9;
        for (Complex w : expected) best = std::min(best, std::abs(w - ev.z));
        CHECK(best < 1e-8);
      }
    }
  }

  TEST_CASE("multithreaded search is deterministic")
  {
    dgtest::Rng rng(403);
    Matrix a = rng.complex_matrix(3, 3), b = rng.complex_matrix(3, 3);
    MetricGraph g = make_star_graph(3, 1.0);
    auto p = dgtest::global_problem(g, a, b);
    Rectangle region{-0.95, 0.95, -1.8, 1.8};
    auto r1 = find_eigenvalues(p, region, 1e-10);
    SolverOptions opt;
    opt.jobs = 4;
    auto r4 = find_eigenvalues(p, region, 1e-10, opt);
    REQUIRE(r1.eigenvalues.size() == r4.eigenvalues.size());
    for (std::size_t i = 0; i < r1.eigenvalues.size(); ++i)
    {
      CHECK(std::abs(r1.eigenvalues[i].z - r4.eigenvalues[i].z) <= 1e-12);
      CHECK(r1.eigenvalues[i].multiplicity == r4.eigenvalues[i].multiplicity);
    }
  }

  TEST_CASE("whole-plane flag for rank-deficient conditions")
  {
    MetricGraph g = make_star_graph(3, 1.0);
    Matrix a = Matrix::Identity(3, 3), b = Matrix::Identity(3, 3);
    a.row(2).setZero();
    b.row(2).setZero();
    auto p = dgtest::global_problem(g, a, b);
    auto report = find_eigenvalues(p, {-0.5, 0.5, -0.5, 0.5}, 1e-10);
    CHECK(report.whole_plane);
    CHECK(report.eigenvalues.empty());
    CHECK(report.essential.kind == EssentialSpectrumResult::Kind::kWholePlane);
    CHECK(report.essential.certified);
  }

  TEST_CASE("essential spectrum classification")
  {
    SUBCASE("compact graph: empty")
    {
      auto p = dgtest::global_problem(dgtest::interval_graph(1.0), Matrix::Zero(2, 2),
                                      Matrix::Identity(2, 2));
      auto e = essential_spectrum(p);
      CHECK(e.kind == EssentialSpectrumResult::Kind::kEmpty);
      CHECK(e.certified);
    }
    SUBCASE("external edges, self-adjoint: rays, certified")
    {
      dgtest::Rng rng(404);
      auto [a, b] = dgtest::cayley_pair(rng.unitary(3));
      auto p = dgtest::global_problem(make_star_graph(3, 1.0), a, b);
      auto e = essential_spectrum(p);
      CHECK(e.kind == EssentialSpectrumResult::Kind::kRays);
      CHECK(e.mass == doctest::Approx(1.0));
      CHECK(e.certified);
    }
    SUBCASE("external edges, generic non-self-adjoint: rays")
    {
      dgtest::Rng rng(405);
      auto p = dgtest::global_problem(make_star_graph(3, 1.0), rng.complex_matrix(3, 3),
                                      rng.complex_matrix(3, 3));
      auto e = essential_spectrum(p);
      CHECK(e.kind == EssentialSpectrumResult::Kind::kRays);
    }
  }

  TEST_CASE("ray strips are reported as unsearched")
  {
    dgtest::Rng rng(406);
    auto [a, b] = dgtest::cayley_pair(rng.unitary(3));
    auto p = dgtest::global_problem(make_star_graph(3, 1.0), a, b);
    // Region straddles the positive ray.
    auto report = find_eigenvalues(p, {0.5, 2.0, -0.4, 0.4}, 1e-10);
    CHECK(report.complete);
    CHECK_FALSE(report.unsearched.empty());
    for (const auto &u : report.unsearched)
    {
      CHECK(u.rect.re0 >= 0.5 - 1e-12);
      CHECK(u.rect.im0 <= 0.0);
      CHECK(u.rect.im1 >= 0.0);
      CHECK_FALSE(u.reason.empty());
    }
  }

  TEST_CASE("resolvent reproduces a manufactured solution")
  {
    // Conditions (0, I) on the interval: domain functions obey ψ²(0) = ψ²(1) = 0.
    auto p = dgtest::global_problem(dgtest::interval_graph(1.0), Matrix::Zero(2, 2),
                                    Matrix::Identity(2, 2));
    Complex z(0.3, 0.4);
    double m = 1.0;
    auto psi1 = [](double x) { return std::exp(0.3 * x); };
    auto psi2 = [](double x) { return x * (1.0 - x); };
    SpinorSampler rhs = [&](double x)
    {
      Complex f1 = -kI * (1.0 - 2.0 * x) + (m - z) * psi1(x);
      Complex f2 = -kI * 0.3 * psi1(x) - (m + z) * psi2(x);
      return Vector2(f1, f2);
    };
    ResolventOptions opt;
    opt.grid_step = 5e-3;
    auto out = resolvent_apply(p, z, {rhs}, opt);
    REQUIRE(out.size() == 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < out[0].x.size(); ++i)
    {
      Vector2 exact(psi1(out[0].x[i]), psi2(out[0].x[i]));
      worst = std::max(worst, (out[0].values[i] - exact).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-3);

    // At the eigenvalue the characteristic matrix is singular.
    CHECK_THROWS_AS(resolvent_apply(p, Complex(1.0, 0.0), {rhs}, opt), NotInResolventSetError);
  }

  TEST_CASE("input validation")
  {
    auto p = dgtest::global_problem(dgtest::interval_graph(1.0), Matrix::Zero(2, 2),
                                    Matrix::Identity(2, 2));
    CHECK_THROWS_AS(find_eigenvalues(p, {1.0, 0.0, -0.5, 0.5}, 1e-10), InputError);
    CHECK_THROWS_AS(find_eigenvalues(p, {0.0, 1.0, -0.5, 0.5}, 0.0), InputError);
    SpinorSampler zero = [](double) { return Vector2(0.0, 0.0); };
    CHECK_THROWS_AS(resolvent_apply(p, Complex(0.0, 0.2), {zero, zero}), InputError);
  }

  TEST_CASE("check_reference_point agrees with the transfer oracle")
  {
    auto p = dgtest::global_problem(dgtest::interval_graph(1.0), Matrix::Zero(2, 2),
                                    Matrix::Identity(2, 2));
    double z1 = std::sqrt(1.0 + M_PI * M_PI);
    auto v = check_reference_point(p, z1);
    CHECK(v.eigenvalue);
    CHECK(v.multiplicity == 1);
    CHECK_FALSE(check_reference_point(p, -1.0).eigenvalue);
  }
}
