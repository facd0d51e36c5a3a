// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "diracgraph/problem.hpp"
#include "diracgraph/types.hpp"

namespace diracgraph
{

// Axis-aligned closed rectangle in the spectral plane.
struct Rectangle
{
  double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;

  double width() const { return re1 - re0; }
  double height() const { return im1 - im0; }
  double diameter() const;
  Complex center() const { return Complex(0.5 * (re0 + re1), 0.5 * (im0 + im1)); }
  bool contains(Complex z, double pad = 0.0) const
  {
    return z.real() >= re0 - pad && z.real() <= re1 + pad && z.imag() >= im0 - pad &&
           z.imag() <= im1 + pad;
  }
};

// Block-diagonal matrix of edge Q-functions in edge slot order, Q(z).
// Throws ReferencePointError (z on the reference spectrum of some edge) or
// BranchPointError (z = ±m on an external edge), tagged with the edge id.
Matrix assemble_Q(const SpectralProblem& p, Complex z);

// Distinct eigenvalues of the decoupled reference operator contributed by the
// internal edges, restricted to [-window, window], sorted ascending.  These
// are exactly the possible poles of the characteristic function.
std::vector<double> graph_reference_eigenvalues(const MetricGraph& g, double window);

// The characteristic matrix M(z) = A·W - B·W·Q(z) and the characteristic
// function F(z) = det M(z).  Zeros of F in the resolvent set of the decoupled
// operator are exactly the eigenvalues of the coupled operator.
Matrix characteristic_matrix(const SpectralProblem& p, Complex z);
Complex char_fn(const SpectralProblem& p, Complex z);

// An eigenfunction, represented as one spinor sampler per edge (graph order).
struct Eigenfunction
{
  std::vector<SpinorSampler> per_edge;
};

struct EigenvalueResult
{
  Complex z;
  int multiplicity = 1;         // geometric: dim ker M(z)
  double residual = 0.0;        // worst transmission-condition violation of the
                                // eigenfunctions below
  std::vector<Eigenfunction> eigenfunctions;  // one per kernel dimension
};

// Verdict at a point of the reference spectrum σ(D⁰), where the Q-function
// blows up and F is unavailable; decided by the transfer-matrix system.
struct ReferencePointVerdict
{
  double z0 = 0.0;
  bool eigenvalue = false;
  int multiplicity = 0;
};

struct EssentialSpectrumResult
{
  enum class Kind
  {
    kEmpty,       // compact graph
    kRays,        // (-∞, -m] ∪ [m, ∞)
    kWholePlane,  // rank-deficient conditions: σ(D) = ℂ
  };
  Kind kind = Kind::kEmpty;
  double mass = 0.0;
  // True when the classification follows from a certified hypothesis
  // (self-adjoint conditions, or an invertibility certificate for M(z) at a
  // sample point); false means "best effort, not certified".
  bool certified = false;
};

struct UnsearchedRegion
{
  Rectangle rect;
  std::string reason;
};

struct SpectralReport
{
  bool whole_plane = false;  // rank-deficient conditions: every z is an eigenvalue
  std::vector<EigenvalueResult> eigenvalues;       // sorted by (Re, Im)
  std::vector<ReferencePointVerdict> reference_points;  // σ(D⁰) points inside the region
  EssentialSpectrumResult essential;
  std::vector<UnsearchedRegion> unsearched;  // strips around the essential rays
  std::vector<Rectangle> unresolved;         // cells the search could not settle
  bool complete = true;                      // false iff unresolved is nonempty
};

struct SolverOptions
{
  int jobs = 1;                       // worker threads for the cell queue
  int max_depth = 40;                 // cell subdivision depth limit
  int boundary_samples = 64;          // initial contour samples per rectangle side
  std::uint64_t seed = 20260814ull;   // reproducible jiggling of split lines
};

// Finds the point spectrum inside `region` to absolute tolerance `tol` by a
// certified argument-principle search on F, with reference-spectrum points
// excised and checked independently.
SpectralReport find_eigenvalues(const SpectralProblem& p, const Rectangle& region, double tol,
                                const SolverOptions& options = SolverOptions{});

struct ResolventOptions
{
  double grid_step = 1e-2;         // target quadrature/sample step per edge
  double external_window = 1.0;    // extra length kept past an external endpoint
};

// A spinor sampled on a uniform grid along one edge.
struct SampledSpinor
{
  std::vector<double> x;
  std::vector<Vector2> values;
};

// Applies (D - z)⁻¹ to a right-hand side given per edge (graph order), via the
// resolvent formula R(z) = R⁰(z) + γ(z) M(z)⁻¹ B W γ(z̄)*.  External right-hand
// sides are assumed supported within `external_window` of the endpoint.
// Throws NotInResolventSetError when z is (numerically) in the spectrum.
std::vector<SampledSpinor> resolvent_apply(const SpectralProblem& p, Complex z,
                                           const std::vector<SpinorSampler>& rhs,
                                           const ResolventOptions& options = ResolventOptions{});

// Classification of the essential spectrum from the graph shape, with a
// certification attempt (see EssentialSpectrumResult::certified).
EssentialSpectrumResult essential_spectrum(const SpectralProblem& p);

// Decides whether a reference-spectrum point z0 ∈ σ(D⁰) ∩ ℝ is an eigenvalue
// of the coupled operator, using the transfer-matrix system (which stays
// finite where Q does not).
ReferencePointVerdict check_reference_point(const SpectralProblem& p, double z0);

}  // namespace diracgraph
