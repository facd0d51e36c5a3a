// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace diracgraph
{

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;
using IntMatrix = Eigen::MatrixXi;

// A spinor-valued function x ↦ (ψ¹(x), ψ²(x))ᵀ on one edge interval.
using SpinorSampler = std::function<Vector2(double)>;

}  // namespace diracgraph
