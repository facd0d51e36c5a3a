// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/edge_spectral.hpp"

#include <algorithm>
#include <cmath>

namespace diracgraph
{

using namespace std::complex_literals;

Complex momentum(Complex z, double m)
{
  Complex k = std::sqrt(z * z - m * m);
  if (k.imag() < 0.0 || (k.imag() == 0.0 && k.real() < 0.0))
  {
    k = -k;
  }
  return k;
}

Complex alpha(Complex z, double m)
{
  const Complex k = momentum(z, m);
  if (k == 0.0)
  {
    throw BranchPointError("alpha: z is a branch point (z = ±m)");
  }
  return (z + m) / k;
}

namespace detail
{

Complex sinc(Complex x)
{
  if (std::abs(x) < 1e-4)
  {
    const Complex x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

Complex internal_regularity(Complex z, double m, double L)
{
  const Complex k = momentum(z, m);
  if (k == 0.0)
  {
    // z = ±m. For m > 0 the point z = m is regular (α sin kL → 2mL); z = −m
    // is always an eigenvalue of the reference operator, as is z = 0 = ±m
    // for m = 0.
    if (z == Complex(m, 0.0) && m > 0.0)
    {
      return Complex(2.0 * m * L, 0.0);
    }
    throw ReferencePointError("internal edge: z lies on the reference spectrum (z = −m branch point)");
  }
  const Complex s = (z + m) * L * sinc(k * L);
  const Complex a = (z + m) / k;
  if (std::abs(s) < 1e-12 * std::max(1.0, std::abs(a)))
  {
    throw ReferencePointError("internal edge: z lies on the reference spectrum (α sin kL ≈ 0)");
  }
  return s;
}

}  // namespace detail

Matrix2 q_internal(Complex z, double m, double L)
{
  const Complex s = detail::internal_regularity(z, m, L);
  const Complex k = momentum(z, m);
  const Complex c = std::cos(k * L);
  Matrix2 q;
  q << -c / s, 1.0 / s, 1.0 / s, -c / s;
  return q;
}

Complex q_external(Complex z, double m)
{
  const Complex k = momentum(z, m);
  if (k.imag() <= 0.0)
  {
    throw ReferencePointError("external edge: z lies on the essential-spectrum rays (Im k(z) = 0)");
  }
  return 1i * k / (z + m);
}

std::vector<double> ref_spectrum_internal(double m, double L, double window)
{
  std::vector<double> out;
  if (m <= window)
  {
    out.push_back(-m);
  }
  for (int l = 1;; l++)
  {
    const double val = std::sqrt(m * m + l * l * M_PI * M_PI / (L * L));
    if (val > window)
    {
      break;
    }
    out.push_back(val);
    out.push_back(-val);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExternalRays ref_spectrum_external(double m)
{
  return ExternalRays{m};
}

std::pair<SpinorSampler, SpinorSampler> eta_internal(Complex z, double m, double a, double b)
{
  const double L = b - a;
  const Complex s = detail::internal_regularity(z, m, L);
  const Complex k = momentum(z, m);
  // sin(k(b−x))/sin(kL) = (b−x)·sinc(k(b−x))/(L·sinc(kL)): branch-free and
  // finite at k = 0; the denominator L·sinc(kL) equals s/(z+m).
  const Complex den = L * detail::sinc(k * L);
  SpinorSampler eta1 = [=](double x) -> Vector2 {
    const double bx = b - x;
    return Vector2(bx * detail::sinc(k * bx) / den, 1i * std::cos(k * bx) / s);
  };
  SpinorSampler eta2 = [=](double x) -> Vector2 {
    const double xa = x - a;
    return Vector2(xa * detail::sinc(k * xa) / den, -1i * std::cos(k * xa) / s);
  };
  return {std::move(eta1), std::move(eta2)};
}

SpinorSampler eta_external(Complex z, double m, double endpoint, int rho)
{
  const Complex k = momentum(z, m);
  if (k.imag() <= 0.0)
  {
    throw NotDecayingError("eta_external: Im k(z) ≤ 0, no decaying defect solution");
  }
  const Complex second = -static_cast<double>(rho) * k / (z + m);  // −ρ/α(z)
  return [=](double x) -> Vector2 {
    const Complex phase = std::exp(-1i * static_cast<double>(rho) * k * (x - endpoint));
    return Vector2(phase, second * phase);
  };
}

SpinorSampler mu_external(Complex z, double m, double endpoint, int rho)
{
  const Complex k = momentum(z, m);
  if (k == 0.0)
  {
    throw ReferencePointError("mu_external: z is a branch point of the external edge");
  }
  const Complex inv_alpha = k / (z + m);
  const double r = static_cast<double>(rho);
  return [=](double x) -> Vector2 {
    const Complex t = k * r * (endpoint - x);
    return Vector2(std::sin(t), 1i * r * inv_alpha * std::cos(t));
  };
}

ResolventKernel resolvent_kernel_internal(Complex z, double m, double a, double b)
{
  const double L = b - a;
  const Complex pref = detail::internal_regularity(z, m, L);  // α(z)·sin(k(z)L)
  auto [eta1, eta2] = eta_internal(z, m, a, b);
  auto [eta1c, eta2c] = eta_internal(std::conj(z), m, a, b);
  ResolventKernel::Side above = [=](double x, double y) -> Matrix2 {
    return pref * (eta1(x) * eta2c(y).adjoint());
  };
  ResolventKernel::Side below = [=](double x, double y) -> Matrix2 {
    return pref * (eta2(x) * eta1c(y).adjoint());
  };
  return ResolventKernel(std::move(above), std::move(below));
}

ResolventKernel resolvent_kernel_external(Complex z, double m, double endpoint, int rho)
{
  const Complex k = momentum(z, m);
  if (k.imag() <= 0.0)
  {
    throw ReferencePointError("external edge: z lies on the essential-spectrum rays (Im k(z) = 0)");
  }
  const Complex al = (z + m) / k;
  SpinorSampler eta = eta_external(z, m, endpoint, rho);
  SpinorSampler mu = mu_external(z, m, endpoint, rho);
  SpinorSampler etac = eta_external(std::conj(z), m, endpoint, rho);
  SpinorSampler muc = mu_external(std::conj(z), m, endpoint, rho);
  // ρ(x−y) < 0 branch: −α η_z(x) μ_{z̄}(y)*; ρ(x−y) > 0: α μ_z(x) η_{z̄}(y)*.
  ResolventKernel::Side neg = [=](double x, double y) -> Matrix2 {
    return -al * (eta(x) * muc(y).adjoint());
  };
  ResolventKernel::Side pos = [=](double x, double y) -> Matrix2 {
    return al * (mu(x) * etac(y).adjoint());
  };
  if (rho < 0)
  {
    // x > y ⇒ ρ(x−y) < 0.
    return ResolventKernel(neg, pos);
  }
  return ResolventKernel(pos, neg);
}

}  // namespace diracgraph
