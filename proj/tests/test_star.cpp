// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"

#include "diracgraph/oracle.hpp"
#include "diracgraph/solver.hpp"
#include "diracgraph/star.hpp"
#include "test_helpers.hpp"

using namespace diracgraph;

namespace
{

Matrix diag3(Complex a, Complex b, Complex c)
{
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST_SUITE("star")
{
  TEST_CASE("pencil spectrum: diagonal examples")
  {
    Matrix b = Matrix::Identity(3, 3);
    auto s = pencil_spectrum(diag3(1, 2, 3), b);
    CHECK(s.kind == PencilSpectrum::Kind::kFinite);
    REQUIRE(s.eigenvalues.size() == 3);
    CHECK(std::abs(s.eigenvalues[0] - 1.0) <= 1e-10);
    CHECK(std::abs(s.eigenvalues[1] - 2.0) <= 1e-10);
    CHECK(std::abs(s.eigenvalues[2] - 3.0) <= 1e-10);
    CHECK(s.multiplicities == std::vector<int>{1, 1, 1});

    auto sm = pencil_spectrum(diag3(2, 2, 3), b);
    REQUIRE(sm.eigenvalues.size() == 2);
    CHECK(std::abs(sm.eigenvalues[0] - 2.0) <= 1e-10);
    CHECK(sm.multiplicities == std::vector<int>{2, 1});
  }

  TEST_CASE("pencil spectrum: defective and singular-B pencils")
  {
    // Jordan block: det(A - λI) = λ², algebraic multiplicity 2.
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    auto s = pencil_spectrum(a, Matrix::Identity(2, 2));
    CHECK(s.kind == PencilSpectrum::Kind::kFinite);
    REQUIRE(s.eigenvalues.size() == 1);
    CHECK(std::abs(s.eigenvalues[0]) <= 1e-8);
    CHECK(s.multiplicities[0] == 2);

    // Singular B: the infinite eigenvalue is discarded.
    Matrix b = Matrix::Zero(2, 2);
    b(0, 0) = 1.0;
    auto si = pencil_spectrum(Matrix::Identity(2, 2), b);
    CHECK(si.kind == PencilSpectrum::Kind::kFinite);
    REQUIRE(si.eigenvalues.size() == 1);
    CHECK(std::abs(si.eigenvalues[0] - 1.0) <= 1e-10);
  }

  TEST_CASE("pencil spectrum: empty and singular cases")
  {
    CHECK(pencil_spectrum(Matrix::Identity(3, 3), Matrix::Zero(3, 3)).kind ==
          PencilSpectrum::Kind::kEmpty);
    // Nilpotent B: det(I - λB) ≡ 1.
    Matrix b = Matrix::Zero(2, 2);
    b(0, 1) = 3.0;
    CHECK(pencil_spectrum(Matrix::Identity(2, 2), b).kind == PencilSpectrum::Kind::kEmpty);

    CHECK(pencil_spectrum(Matrix::Zero(2, 2), Matrix::Zero(2, 2)).kind ==
          PencilSpectrum::Kind::kSingular);
    // det(A - λB) ≡ 0 with nonzero matrices: shared kernel column.
    Matrix a2 = Matrix::Zero(2, 2), b2 = Matrix::Zero(2, 2);
    a2(0, 0) = 1.0;
    b2(0, 0) = 2.0;
    CHECK(pencil_spectrum(a2, b2).kind == PencilSpectrum::Kind::kSingular);
    CHECK(classify_regularity(a2, b2) == StarRegularity::kWholePlane);
  }

  TEST_CASE("admissibility map: left half-plane eigenvalues land in the gap")
  {
    // B = -2I: λ = -1/2 with multiplicity 3 → z = m(1-λ²)/(1+λ²) = 3/5.
    auto s = star_point_spectrum(Matrix::Identity(3, 3), -2.0 * Matrix::Identity(3, 3), 1.0);
    CHECK(s.regularity == StarRegularity::kFinitePencil);
    CHECK_FALSE(s.whole_plane);
    REQUIRE(s.point_spectrum.size() == 1);
    CHECK(std::abs(s.point_spectrum[0] - 0.6) <= 1e-12);
    CHECK(s.multiplicities[0] == 3);
    CHECK(s.reference_candidates.empty());

    // A = I, B = -I: λ = -1 (multiplicity N) → z = 0.
    auto s0 = star_point_spectrum(Matrix::Identity(3, 3), -Matrix::Identity(3, 3), 1.0);
    REQUIRE(s0.point_spectrum.size() == 1);
    CHECK(std::abs(s0.point_spectrum[0]) <= 1e-12);
    CHECK(s0.multiplicities[0] == 3);

    // A mixing admitted and rejected eigenvalues: λ ∈ {i, -3}.
    auto sm = star_point_spectrum(diag3(Complex(0, 1), -3, -3), Matrix::Identity(3, 3), 1.0);
    REQUIRE(sm.point_spectrum.size() == 1);
    // λ = -3: z = (1-9)/(1+9) = -0.8.
    CHECK(std::abs(sm.point_spectrum[0] - Complex(-0.8, 0.0)) <= 1e-12);
    CHECK(sm.multiplicities[0] == 2);
    bool found_rejected_i = false;
    for (const auto &note : sm.notes)
      if (std::abs(note.lambda - Complex(0, 1)) < 1e-9 && !note.admitted) found_rejected_i = true;
    CHECK(found_rejected_i);
  }

  TEST_CASE("admissibility map: scalar conditions equal to ±i or the right half-plane")
  {
    // α·I and B = 0: empty pencil, empty spectrum (criterion case).
    auto se = star_point_spectrum(Complex(2.0, 0.7) * Matrix::Identity(3, 3), Matrix::Zero(3, 3),
                                  1.0);
    CHECK(se.regularity == StarRegularity::kEmptyPencil);
    CHECK(se.point_spectrum.empty());
    CHECK_FALSE(se.whole_plane);

    // (0, 0): singular pencil, the whole plane.
    auto sw = star_point_spectrum(Matrix::Zero(3, 3), Matrix::Zero(3, 3), 1.0);
    CHECK(sw.regularity == StarRegularity::kWholePlane);
    CHECK(sw.whole_plane);

    // λ with Re λ > 0: no point spectrum for m > 0.
    auto sr = star_point_spectrum(Complex(1.0, 0.5) * Matrix::Identity(2, 2),
                                  Matrix::Identity(2, 2), 1.0);
    CHECK(sr.point_spectrum.empty());
    CHECK(sr.reference_candidates.empty());

    // λ = ±i for m > 0: rejected (the preimage escapes to infinity).
    auto si = star_point_spectrum(Complex(0, 1) * Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                  1.0);
    CHECK(si.point_spectrum.empty());
    CHECK_FALSE(si.upper_half_plane);
  }

  TEST_CASE("purely imaginary eigenvalues are forwarded as ray candidates")
  {
    // λ = 2i: t = 2 → candidate z = m(1+t²)/(1-t²) = -5/3 on the rays.
    auto s = star_point_spectrum(Complex(0, 2) * Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                                 1.0);
    CHECK(s.point_spectrum.empty());
    REQUIRE(s.reference_candidates.size() == 1);
    CHECK(s.reference_candidates[0] == doctest::Approx(-5.0 / 3.0).epsilon(1e-12));

    // The candidate is never an actual eigenvalue on a pure star graph.
    MetricGraph g = make_star_graph(2, 1.0);
    auto p = dgtest::global_problem(g, Complex(0, 2) * Matrix::Identity(2, 2),
                                    Matrix::Identity(2, 2));
    auto verdict = check_reference_point(p, -5.0 / 3.0);
    CHECK_FALSE(verdict.eigenvalue);

    // λ = it with t ∈ (-1, 1): candidate on the right ray.
    auto s2 = star_point_spectrum(Complex(0, 0.5) * Matrix::Identity(2, 2),
                                  Matrix::Identity(2, 2), 1.0);
    REQUIRE(s2.reference_candidates.size() == 1);
    CHECK(s2.reference_candidates[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("massless star: ±i eigenvalues fill half-planes")
  {
    Matrix one = Matrix::Identity(1, 1);
    auto up = star_point_spectrum(Complex(0, 1) * one, one, 0.0);
    CHECK(up.upper_half_plane);
    CHECK_FALSE(up.lower_half_plane);
    auto down = star_point_spectrum(Complex(0, -1) * one, one, 0.0);
    CHECK(down.lower_half_plane);
    CHECK_FALSE(down.upper_half_plane);

    // m = 0 with Re λ < 0: the preimage collapses onto the rays (z = 0).
    auto s = star_point_spectrum(-1.0 * one, one, 0.0);
    CHECK(s.point_spectrum.empty());
    REQUIRE(s.reference_candidates.size() == 1);
    CHECK(s.reference_candidates[0] == doctest::Approx(0.0));
  }

  TEST_CASE("random stars agree with the transfer-matrix oracle")
  {
    for (std::uint64_t seed : {11u, 12u, 13u, 14u})
    {
      dgtest::Rng rng(seed);
      Matrix a = rng.complex_matrix(3, 3), b = rng.complex_matrix(3, 3);
      auto s = star_point_spectrum(a, b, 1.0);
      MetricGraph g = make_star_graph(3, 1.0);
      auto p = dgtest::global_problem(g, a, b);
      for (std::size_t i = 0; i < s.point_spectrum.size(); ++i)
      {
        Complex z = s.point_spectrum[i];
        CAPTURE(seed);
        CAPTURE(z);
        CHECK(oracle_kernel_dim(p, z) == s.multiplicities[i]);
      }
    }
  }

  TEST_CASE("star graph construction")
  {
    MetricGraph g = make_star_graph(3, 1.5);
    CHECK(g.num_external() == 3);
    CHECK(g.num_internal() == 0);
    CHECK(g.boundary_dim() == 3);
    CHECK(g.mass() == 1.5);
    CHECK(g.num_vertices() == 1);
    for (const auto &e : g.edges())
    {
      const auto &x = std::get<ExternalEdge>(e);
      CHECK(x.rho == -1);
      CHECK(x.endpoint == 0.0);
    }
    CHECK_THROWS_AS(make_star_graph(0, 1.0), GraphError);
  }
}
