// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "diracgraph/problem.hpp"
#include "diracgraph/types.hpp"

namespace diracgraph
{

// Fundamental matrix solution of the one-dimensional Dirac system
//
//   (-i σ₁ d/dx + m σ₃) ψ = z ψ,
//
// i.e. Φ_z(x) = exp(x (i z σ₁ - m σ₂)) with Φ_z(0) = I and det Φ_z(x) = 1.
// Evaluated in the closed form
//
//   Φ_z(x) = cos(kx) I + x sinc(kx) G,   G = [[0, i(z+m)], [i(z-m), 0]],
//
// which is entire in z (no branch choice) and exact at k = 0.
class FundamentalSolution
{
public:
  FundamentalSolution(Complex z, double m);

  Matrix2 operator()(double x) const;

  Complex z() const { return z_; }
  double mass() const { return m_; }

private:
  Complex z_;
  double m_;
  Complex k_;  // momentum(z, m); only k² enters, so the branch is irrelevant
};

// Assembles the transfer-matrix linear system whose kernel corresponds to
// eigenfunctions at z.  Columns enumerate a basis of formal solutions edge by
// edge in graph order:
//   - each internal edge contributes two columns (the columns of Φ_z(x-a));
//   - each external edge contributes one column (the decaying exponential),
//     provided Im momentum(z) > 0; otherwise the edge admits no decaying
//     solution and contributes no column (the system becomes rectangular).
// Each column is A·W·Γ¹ψ - B·W·Γ²ψ of the corresponding basis solution.
Matrix oracle_system(const SpectralProblem& p, Complex z);

// Determinant of the square oracle system.  Zeros coincide with the point
// spectrum away from the reference spectrum.  Throws ThresholdRegionError when
// the graph has external edges and Im momentum(z) = 0 (system not square).
Complex oracle_char_fn(const SpectralProblem& p, Complex z);

// Dimension of the kernel of the oracle system (geometric multiplicity of z
// as an eigenvalue).  Works for rectangular systems too, so it remains valid
// on the reference spectrum where the determinant is unavailable.
int oracle_kernel_dim(const SpectralProblem& p, Complex z);

// Max-norm residual of the Dirac equation for a sampled spinor on [x0, x1],
// using centered differences with step h on interior grid points.
double ode_residual(const SpinorSampler& psi, Complex z, double m, double x0, double x1,
                    double h);

// Relative violation of the transmission conditions A·W·Γ¹ψ = B·W·Γ²ψ for a
// function given per edge (graph edge order).  External samplers are evaluated
// at the edge endpoint only.
double boundary_residual(const SpectralProblem& p, const std::vector<SpinorSampler>& per_edge);

}  // namespace diracgraph
