// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "diracgraph/errors.hpp"
#include "diracgraph/types.hpp"

namespace diracgraph
{

// Branch momentum k(z) = √(z² − m²) with arg k(z) ∈ [0, π): the principal
// square root, negated when its argument is negative.
Complex momentum(Complex z, double m);

// α(z) = k(z)/(z−m) = (z+m)/k(z). Throws BranchPointError at z = ±m
// (z = 0 for m = 0), where k(z) = 0.
Complex alpha(Complex z, double m);

namespace detail
{

// sin(x)/x continued by its power series near 0 (even entire function).
Complex sinc(Complex x);

// α(z)·sin(k(z)L) evaluated in the cancellation-free form (z+m)·L·sinc(kL);
// finite and nonzero on ρ(D⁰) of an internal edge of length L, equal to
// 2mL at z = m. Throws ReferencePointError on σ(D⁰) of the edge.
Complex internal_regularity(Complex z, double m, double L);

}  // namespace detail

// 2×2 Q-function block of an internal edge of length L:
// Q(z) = −(α sin kL)⁻¹ [[cos kL, −1],[−1, cos kL]], with the z = m value
// −(2mL)⁻¹ [[1,−1],[−1,1]] reached through the same cancellation-free form.
// Throws ReferencePointError on σ(D⁰) of the edge.
Matrix2 q_internal(Complex z, double m, double L);

// 1×1 Q-function of an external edge: Q(z) = i/α(z), independent of the
// orientation. Throws ReferencePointError on the rays (−∞,−m] ∪ [m,+∞).
Complex q_external(Complex z, double m);

// Eigenvalues {−m} ∪ {±√(m² + l²π²/L²) : l ∈ ℕ} of the reference operator
// on one internal edge, restricted to [−window, window], sorted ascending.
// All are simple; +m is never an eigenvalue for m > 0.
std::vector<double> ref_spectrum_internal(double m, double L, double window);

// Purely continuous reference spectrum of an external edge: the two rays
// (−∞,−m] ∪ [m,+∞).
struct ExternalRays
{
  double m;

  bool contains(Complex z) const { return z.imag() == 0.0 && std::abs(z.real()) >= m; }
};

ExternalRays ref_spectrum_external(double m);

// Defect-space basis of an internal edge (a,b), normalized so that
// Γ¹η₁ = (1,0)ᵀ and Γ¹η₂ = (0,1)ᵀ. Throws ReferencePointError.
std::pair<SpinorSampler, SpinorSampler> eta_internal(Complex z, double m, double a, double b);

// Decaying defect solution of an external edge,
// η_z(x) = e^{−iρk(z)(x−∂)}(1, −ρ/α(z))ᵀ; requires Im k(z) > 0, otherwise
// throws NotDecayingError.
SpinorSampler eta_external(Complex z, double m, double endpoint, int rho);

// Auxiliary spinor of the external resolvent kernel:
// μ_z(x) = (sin(kρ(∂−x)), (ρi/α)cos(kρ(∂−x)))ᵀ.
SpinorSampler mu_external(Complex z, double m, double endpoint, int rho);

// Reference resolvent kernel of a single edge, with explicit one-sided
// values at the diagonal (the kernel of a first-order operator jumps there).
class ResolventKernel
{
public:
  using Side = std::function<Matrix2(double, double)>;

  ResolventKernel(Side above, Side below) : above_(std::move(above)), below_(std::move(below)) {}

  // One-sided evaluation: x_above selects the x > y branch.
  Matrix2 eval(double x, double y, bool x_above) const
  {
    return x_above ? above_(x, y) : below_(x, y);
  }

  Matrix2 operator()(double x, double y) const { return eval(x, y, x > y); }

private:
  Side above_;
  Side below_;
};

// Internal-edge kernel: R_z(x,y) = α sin(kL)·η_{z,1}(x)η_{z̄,2}(y)* for
// x > y and α sin(kL)·η_{z,2}(x)η_{z̄,1}(y)* for x < y (prefactor 2m(b−a)
// at z = m). Throws ReferencePointError.
ResolventKernel resolvent_kernel_internal(Complex z, double m, double a, double b);

// External-edge kernel: R_z(x,y) = −α η_z(x)μ_{z̄}(y)* for ρ(x−y) < 0 and
// α μ_z(x)η_{z̄}(y)* for ρ(x−y) > 0. Throws ReferencePointError.
ResolventKernel resolvent_kernel_external(Complex z, double m, double endpoint, int rho);

}  // namespace diracgraph
