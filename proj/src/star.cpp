// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/star.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "diracgraph/errors.hpp"

namespace diracgraph
{

namespace
{

constexpr Complex kImagUnit{0.0, 1.0};

void check_pencil_shapes(const Matrix& A, const Matrix& B)
{
  if (A.rows() == 0 || A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
  {
    throw ConditionError("pencil requires square matrices of equal nonzero size, got " +
                         std::to_string(A.rows()) + "×" + std::to_string(A.cols()) + " and " +
                         std::to_string(B.rows()) + "×" + std::to_string(B.cols()));
  }
}

double smallest_singular_value(const Matrix& M)
{
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

int kernel_dimension(const Matrix& M)
{
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& sigma = svd.singularValues();
  const double floor = 1e-10 * std::max(sigma(0), 1e-300);
  int dim = 0;
  for (int i = 0; i < sigma.size(); i++)
  {
    if (sigma(i) <= floor)
    {
      dim++;
    }
  }
  return dim;
}

// det(A - λB) is a polynomial in λ of degree at most N, so finding one sample
// with A - λB regular rules out the identically-singular pencil; conversely a
// healthy margin of samples that are all singular certifies it numerically.
bool pencil_is_singular(const Matrix& A, const Matrix& B, std::uint64_t seed)
{
  const int n = static_cast<int>(A.rows());
  const double norm_a = A.norm(), norm_b = B.norm();
  if (norm_a == 0.0 && norm_b == 0.0)
  {
    return true;
  }
  const double radius = 2.0 * (1.0 + norm_a / std::max(norm_b, 1e-300));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int samples = n * n + 1;
  for (int i = 0; i < samples; i++)
  {
    const Complex lambda = radius * Complex(unit(rng), unit(rng));
    const Matrix M = A - lambda * B;
    if (smallest_singular_value(M) > 1e-10 * std::max(M.norm(), 1e-300))
    {
      return false;
    }
  }
  return true;
}

}  // namespace

PencilSpectrum pencil_spectrum(const Matrix& A, const Matrix& B, std::uint64_t seed)
{
  check_pencil_shapes(A, B);
  const int n = static_cast<int>(A.rows());

  PencilSpectrum out;
  if (pencil_is_singular(A, B, seed))
  {
    out.kind = PencilSpectrum::Kind::kSingular;
    return out;
  }

  // Shift-invert: the nonzero eigenvalues θ of C = (A - μB)⁻¹B at a regular
  // shift μ are in bijection λ = μ + 1/θ with the pencil eigenvalues; θ = 0
  // corresponds to λ = ∞.
  const double radius = 1.0 + A.norm() / std::max(B.norm(), 1e-300);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Complex mu(0.0, 0.0);
  double best_quality = -1.0;
  for (int attempt = 0; attempt < 48; attempt++)
  {
    Complex candidate;
    switch (attempt)
    {
      case 0:
        candidate = Complex(0.0, 0.0);
        break;
      case 1:
        candidate = Complex(radius, 0.37 * radius);
        break;
      case 2:
        candidate = Complex(-radius, 0.61 * radius);
        break;
      case 3:
        candidate = Complex(0.29 * radius, -radius);
        break;
      default:
        candidate = radius * Complex(unit(rng), unit(rng));
        break;
    }
    const Matrix M = A - candidate * B;
    const double quality = smallest_singular_value(M) / std::max(M.norm(), 1e-300);
    if (quality > best_quality)
    {
      best_quality = quality;
      mu = candidate;
    }
    if (quality > 1e-6)
    {
      break;
    }
  }

  const Matrix shifted = A - mu * B;
  const Matrix C = shifted.partialPivLu().solve(B);
  Eigen::ComplexEigenSolver<Matrix> ces(C, /*computeEigenvectors=*/false);
  if (ces.info() != Eigen::Success)
  {
    throw Error("pencil eigensolver failed to converge");
  }

  double theta_max = 0.0;
  for (int i = 0; i < n; i++)
  {
    theta_max = std::max(theta_max, std::abs(ces.eigenvalues()(i)));
  }
  std::vector<Complex> lambdas;
  for (int i = 0; i < n; i++)
  {
    const Complex theta = ces.eigenvalues()(i);
    if (std::abs(theta) > 1e-12 * std::max(theta_max, 1e-300))
    {
      lambdas.push_back(mu + 1.0 / theta);
    }
  }

  if (lambdas.empty())
  {
    out.kind = PencilSpectrum::Kind::kEmpty;
    return out;
  }

  std::sort(lambdas.begin(), lambdas.end(), [](Complex a, Complex b) {
    if (a.real() != b.real())
    {
      return a.real() < b.real();
    }
    return a.imag() < b.imag();
  });
  // Greedy clustering: repeated eigenvalues are recovered by the eigensolver
  // only to roughly sqrt(machine epsilon), so the radius is generous.
  std::size_t i = 0;
  while (i < lambdas.size())
  {
    Complex sum = lambdas[i];
    std::size_t jend = i + 1;
    while (jend < lambdas.size() &&
           std::abs(lambdas[jend] - lambdas[i]) <= 1e-7 * std::max(1.0, std::abs(lambdas[i])))
    {
      sum += lambdas[jend];
      jend++;
    }
    out.eigenvalues.push_back(sum / static_cast<double>(jend - i));
    out.multiplicities.push_back(static_cast<int>(jend - i));
    i = jend;
  }
  out.kind = PencilSpectrum::Kind::kFinite;
  return out;
}

StarRegularity classify_regularity(const Matrix& A, const Matrix& B, std::uint64_t seed)
{
  switch (pencil_spectrum(A, B, seed).kind)
  {
    case PencilSpectrum::Kind::kSingular:
      return StarRegularity::kWholePlane;
    case PencilSpectrum::Kind::kEmpty:
      return StarRegularity::kEmptyPencil;
    case PencilSpectrum::Kind::kFinite:
    default:
      return StarRegularity::kFinitePencil;
  }
}

StarSpectrum star_point_spectrum(const Matrix& A, const Matrix& B, double m, std::uint64_t seed)
{
  check_pencil_shapes(A, B);
  if (m < 0.0 || !std::isfinite(m))
  {
    throw InputError("star_point_spectrum requires a finite mass m >= 0");
  }

  StarSpectrum out;
  const PencilSpectrum pencil = pencil_spectrum(A, B, seed);
  if (pencil.kind == PencilSpectrum::Kind::kSingular)
  {
    out.regularity = StarRegularity::kWholePlane;
    out.whole_plane = true;
    return out;
  }
  out.regularity = pencil.kind == PencilSpectrum::Kind::kEmpty ? StarRegularity::kEmptyPencil
                                                               : StarRegularity::kFinitePencil;

  std::vector<std::pair<Complex, int>> admitted;  // (z, geometric multiplicity)
  for (std::size_t idx = 0; idx < pencil.eigenvalues.size(); idx++)
  {
    const Complex lambda = pencil.eigenvalues[idx];
    StarLambdaNote note;
    note.lambda = lambda;
    note.multiplicity = pencil.multiplicities[idx];

    const double axis_tol = 1e-12 * std::max(1.0, std::abs(lambda));
    const bool at_plus_i = std::abs(lambda - kImagUnit) <= axis_tol;
    const bool at_minus_i = std::abs(lambda + kImagUnit) <= axis_tol;
    if (at_plus_i || at_minus_i)
    {
      if (m == 0.0)
      {
        note.admitted = true;
        note.reason = at_plus_i ? "m = 0 and lambda = +i: the entire open upper half-plane"
                                : "m = 0 and lambda = -i: the entire open lower half-plane";
        out.upper_half_plane = out.upper_half_plane || at_plus_i;
        out.lower_half_plane = out.lower_half_plane || at_minus_i;
      }
      else
      {
        note.reason = "lambda = ±i corresponds to z = ∞; no eigenvalue for m > 0";
      }
      out.notes.push_back(note);
      continue;
    }

    if (std::abs(lambda.real()) <= axis_tol)
    {
      // Purely imaginary lambda = it: the candidate z = m(1+t²)/(1-t²) lies on
      // the reference spectrum, where the decaying-solution argument breaks
      // down.  Forward the candidate for an independent threshold check.
      const double t = lambda.imag();
      const double denom = 1.0 - t * t;
      note.reason = "branch condition fails: lambda is purely imaginary, candidate z lies on "
                    "the reference spectrum";
      if (denom != 0.0)
      {
        const double z_candidate = m * (1.0 + t * t) / denom;
        note.has_z = true;
        note.z = Complex(z_candidate, 0.0);
        out.reference_candidates.push_back(z_candidate);
      }
      out.notes.push_back(note);
      continue;
    }

    if (lambda.real() > 0.0)
    {
      note.reason = "branch condition fails: Re lambda > 0 is outside the image of i/alpha";
      out.notes.push_back(note);
      continue;
    }

    // Re lambda < 0: invert i/alpha(z) = lambda.
    const Complex z = m * (1.0 - lambda * lambda) / (1.0 + lambda * lambda);
    note.has_z = true;
    note.z = z;
    if (m == 0.0)
    {
      note.reason = "m = 0 collapses the candidate to z = 0 on the reference spectrum";
      out.reference_candidates.push_back(0.0);
      out.notes.push_back(note);
      continue;
    }
    note.admitted = true;
    note.reason = "Re lambda < 0: z = m(1-lambda^2)/(1+lambda^2)";
    admitted.emplace_back(z, kernel_dimension(A - lambda * B));
    out.notes.push_back(note);
  }

  std::sort(admitted.begin(), admitted.end(),
            [](const std::pair<Complex, int>& a, const std::pair<Complex, int>& b) {
              if (a.first.real() != b.first.real())
              {
                return a.first.real() < b.first.real();
              }
              return a.first.imag() < b.first.imag();
            });
  for (const auto& [z, mult] : admitted)
  {
    out.point_spectrum.push_back(z);
    out.multiplicities.push_back(mult);
  }
  return out;
}

MetricGraph make_star_graph(int num_edges, double mass)
{
  if (num_edges < 1)
  {
    throw GraphError("a star graph needs at least one edge");
  }
  std::vector<VertexId> vertices = {"v"};
  std::vector<Edge> edges;
  for (int i = 1; i <= num_edges; i++)
  {
    edges.push_back(ExternalEdge{"e" + std::to_string(i), "v", -1, 0.0});
  }
  return MetricGraph(vertices, edges, mass);
}

}  // namespace diracgraph
