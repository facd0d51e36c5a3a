// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "diracgraph/edge_spectral.hpp"
#include "diracgraph/errors.hpp"

namespace diracgraph
{

namespace
{

constexpr Complex kI{0.0, 1.0};

// Generator G with Φ_z(x) = exp(x (iz σ₁ - m σ₂)) = cos(kx) I + x sinc(kx) G,
// using G² = -k² I.
Matrix2 generator(Complex z, double m)
{
  Matrix2 g;
  g << Complex(0.0, 0.0), kI * (z + m), kI * (z - m), Complex(0.0, 0.0);
  return g;
}

// Boundary trace pair (Γ¹ψ, Γ²ψ) restricted to the slots of one edge.
// Internal edge: values (ψ(a), ψ(b));  Γ¹ = (ψ¹(a), ψ¹(b)), Γ² = (iψ²(a), -iψ²(b)).
// External edge: value ψ(∂);           Γ¹ = ψ¹(∂),          Γ² = -iρ ψ²(∂).
void write_internal_trace(Vector& g1, Vector& g2, int off, const Vector2& at_a,
                          const Vector2& at_b)
{
  g1(off) = at_a(0);
  g1(off + 1) = at_b(0);
  g2(off) = kI * at_a(1);
  g2(off + 1) = -kI * at_b(1);
}

void write_external_trace(Vector& g1, Vector& g2, int off, int rho, const Vector2& at_endpoint)
{
  g1(off) = at_endpoint(0);
  g2(off) = -kI * static_cast<double>(rho) * at_endpoint(1);
}

}  // namespace

FundamentalSolution::FundamentalSolution(Complex z, double m)
  : z_(z), m_(m), k_(momentum(z, m))
{
}

Matrix2 FundamentalSolution::operator()(double x) const
{
  const Complex c = std::cos(k_ * x);
  const Complex s = x * detail::sinc(k_ * x);
  Matrix2 out;
  out << c, kI * (z_ + m_) * s, kI * (z_ - m_) * s, c;
  return out;
}

Matrix oracle_system(const SpectralProblem& p, Complex z)
{
  const MetricGraph& g = p.graph;
  const int n = g.boundary_dim();
  const double m = g.mass();
  const Complex k = momentum(z, m);
  const bool decaying = k.imag() > 0.0;

  const Matrix& A = p.conditions.A;
  const Matrix& B = p.conditions.B;
  const Permutation& W = p.conditions.W;

  std::vector<Vector> columns;
  columns.reserve(static_cast<std::size_t>(n));

  for (std::size_t j = 0; j < g.edges().size(); j++)
  {
    const Edge& e = g.edges()[j];
    const int off = g.slot_offset(static_cast<int>(j));
    if (is_internal(e))
    {
      const auto& ie = std::get<InternalEdge>(e);
      const FundamentalSolution phi(z, m);
      const Matrix2 phi_len = phi(ie.length());
      for (int u = 0; u < 2; u++)
      {
        // Basis solution ψ(x) = Φ_z(x - a) e_u on [a, b].
        Vector2 at_a = Vector2::Zero();
        at_a(u) = 1.0;
        const Vector2 at_b = phi_len.col(u);
        Vector g1 = Vector::Zero(n), g2 = Vector::Zero(n);
        write_internal_trace(g1, g2, off, at_a, at_b);
        columns.push_back(A * W.apply(g1) - B * W.apply(g2));
      }
    }
    else
    {
      if (!decaying)
      {
        continue;  // no decaying solution on this half-line at this z
      }
      const auto& ee = std::get<ExternalEdge>(e);
      // Decaying solution ψ(x) = e^{-iρk(x-∂)} w with G w = -iρk w.  Since
      // G² = -k² I, we get G (G - iρk I) = -iρk (G - iρk I), so any nonzero
      // column of (G - iρk I) is such an eigenvector.
      const Matrix2 shifted =
          generator(z, m) - kI * static_cast<double>(ee.rho) * k * Matrix2::Identity();
      Vector2 w = shifted.col(0);
      if (shifted.col(1).norm() > w.norm())
      {
        w = shifted.col(1);
      }
      w /= w.norm();
      Vector g1 = Vector::Zero(n), g2 = Vector::Zero(n);
      write_external_trace(g1, g2, off, ee.rho, w);
      columns.push_back(A * W.apply(g1) - B * W.apply(g2));
    }
  }

  Matrix system(n, static_cast<int>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); c++)
  {
    system.col(static_cast<int>(c)) = columns[c];
  }
  return system;
}

Complex oracle_char_fn(const SpectralProblem& p, Complex z)
{
  const Matrix system = oracle_system(p, z);
  if (system.rows() != system.cols())
  {
    throw ThresholdRegionError(
        "oracle characteristic function undefined: Im momentum(z) = 0 with external edges "
        "present (no decaying solutions; use oracle_kernel_dim instead)");
  }
  return system.determinant();
}

int oracle_kernel_dim(const SpectralProblem& p, Complex z)
{
  const Matrix system = oracle_system(p, z);
  if (system.cols() == 0)
  {
    return 0;
  }
  Eigen::JacobiSVD<Matrix> svd(system);
  const auto& sigma = svd.singularValues();
  const double floor = 1e-8 * std::max(sigma(0), 1e-300);
  int kernel = 0;
  for (int i = 0; i < sigma.size(); i++)
  {
    if (sigma(i) <= floor)
    {
      kernel++;
    }
  }
  kernel += static_cast<int>(system.cols() - sigma.size());
  return kernel;
}

double ode_residual(const SpinorSampler& psi, Complex z, double m, double x0, double x1,
                    double h)
{
  if (!(x1 > x0) || !(h > 0.0))
  {
    throw InputError("ode_residual requires x1 > x0 and h > 0");
  }
  const int n = std::max(3, static_cast<int>(std::lround((x1 - x0) / h)) + 1);
  const double step = (x1 - x0) / (n - 1);

  std::vector<Vector2> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; i++)
  {
    values[static_cast<std::size_t>(i)] = psi(x0 + step * i);
  }

  double worst = 0.0;
  for (int i = 1; i + 1 < n; i++)
  {
    const Vector2 d =
        (values[static_cast<std::size_t>(i + 1)] - values[static_cast<std::size_t>(i - 1)]) /
        (2.0 * step);
    const Vector2& v = values[static_cast<std::size_t>(i)];
    Vector2 r;
    r(0) = -kI * d(1) + m * v(0) - z * v(0);
    r(1) = -kI * d(0) - m * v(1) - z * v(1);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

double boundary_residual(const SpectralProblem& p, const std::vector<SpinorSampler>& per_edge)
{
  const MetricGraph& g = p.graph;
  if (per_edge.size() != g.edges().size())
  {
    throw InputError("boundary_residual: expected one sampler per edge (" +
                     std::to_string(g.edges().size()) + "), got " +
                     std::to_string(per_edge.size()));
  }
  const int n = g.boundary_dim();
  Vector g1 = Vector::Zero(n), g2 = Vector::Zero(n);
  double trace_norm_sq = 0.0;
  for (std::size_t j = 0; j < g.edges().size(); j++)
  {
    const Edge& e = g.edges()[j];
    const int off = g.slot_offset(static_cast<int>(j));
    const SpinorSampler& f = per_edge[j];
    if (is_internal(e))
    {
      const auto& ie = std::get<InternalEdge>(e);
      const Vector2 at_a = f(ie.a);
      const Vector2 at_b = f(ie.b);
      write_internal_trace(g1, g2, off, at_a, at_b);
      trace_norm_sq += at_a.squaredNorm() + at_b.squaredNorm();
    }
    else
    {
      const auto& ee = std::get<ExternalEdge>(e);
      const Vector2 at_endpoint = f(ee.endpoint);
      write_external_trace(g1, g2, off, ee.rho, at_endpoint);
      trace_norm_sq += at_endpoint.squaredNorm();
    }
  }
  const Permutation& W = p.conditions.W;
  const Vector violation = p.conditions.A * W.apply(g1) - p.conditions.B * W.apply(g2);
  return violation.norm() / std::max(1.0, std::sqrt(trace_norm_sq));
}

}  // namespace diracgraph
