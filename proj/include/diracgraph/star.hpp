// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diracgraph/graph.hpp"
#include "diracgraph/types.hpp"

namespace diracgraph
{

// Spectrum of the linear matrix pencil A - λB:  σ(A,B) = {λ : det(A - λB) = 0}.
struct PencilSpectrum
{
  enum class Kind
  {
    kSingular,  // det(A - λB) ≡ 0, every λ is an eigenvalue
    kEmpty,     // no finite eigenvalues (det(A - λB) is a nonzero constant)
    kFinite,    // finitely many eigenvalues, listed below
  };

  Kind kind = Kind::kEmpty;
  std::vector<Complex> eigenvalues;   // distinct, sorted by (Re, Im)
  std::vector<int> multiplicities;    // algebraic multiplicity per entry
};

PencilSpectrum pencil_spectrum(const Matrix& A, const Matrix& B, std::uint64_t seed = 20260814u);

// Trichotomy for a star graph (one vertex, E outgoing external edges, no
// internal edges) with conditions A·Γ¹ = B·Γ²:
//   kWholePlane — pencil singular: every z ∈ ℂ is an eigenvalue,
//   kEmptyPencil — pencil has no eigenvalues: point spectrum is empty,
//   kFinitePencil — finitely many pencil eigenvalues generate the spectrum.
enum class StarRegularity
{
  kWholePlane,
  kEmptyPencil,
  kFinitePencil,
};

StarRegularity classify_regularity(const Matrix& A, const Matrix& B,
                                   std::uint64_t seed = 20260814u);

// Disposition of one pencil eigenvalue under the admissibility map.  On a star
// graph the characteristic equation reduces to i/α(z) = λ for λ ∈ σ(A,B).  For
// m > 0 the map z ↦ i/α(z) is a bijection from ℂ \ σ(D⁰) onto the open left
// half-plane {Re λ < 0}, inverted by z = m(1-λ²)/(1+λ²).  Purely imaginary λ
// correspond to boundary values on σ(D⁰) (forwarded as reference candidates),
// λ with Re λ > 0 to nothing, and λ = ±i to z = ∞ — except at m = 0, where
// every z in the upper (lower) half-plane satisfies i/α(z) = +i (-i), so those
// two pencil eigenvalues each contribute an entire half-plane.
struct StarLambdaNote
{
  Complex lambda;
  int multiplicity = 1;
  bool admitted = false;
  bool has_z = false;
  Complex z;              // inverse image m(1-λ²)/(1+λ²) when defined
  std::string reason;     // why the eigenvalue was rejected / how admitted
};

struct StarSpectrum
{
  StarRegularity regularity = StarRegularity::kEmptyPencil;
  bool whole_plane = false;       // σ_p = ℂ (singular pencil)
  bool upper_half_plane = false;  // m = 0 and λ = +i: ℂ₊ ⊂ σ_p
  bool lower_half_plane = false;  // m = 0 and λ = -i: ℂ₋ ⊂ σ_p
  std::vector<Complex> point_spectrum;       // isolated eigenvalues, sorted by (Re, Im)
  std::vector<int> multiplicities;           // geometric multiplicity of each
  std::vector<StarLambdaNote> notes;         // per distinct pencil eigenvalue
  std::vector<double> reference_candidates;  // rejected real candidates on σ(D⁰),
                                             // to be screened by the threshold test
};

// Closed-form point spectrum of the star-graph Dirac operator with mass m ≥ 0.
// A and B must be E×E where E is the number of (outgoing) external edges.
StarSpectrum star_point_spectrum(const Matrix& A, const Matrix& B, double m,
                                 std::uint64_t seed = 20260814u);

// Star graph: a single vertex with num_edges outgoing external edges
// e1, ..., eE, all with endpoint 0.
MetricGraph make_star_graph(int num_edges, double mass);

}  // namespace diracgraph
