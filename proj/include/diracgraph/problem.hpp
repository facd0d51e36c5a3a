// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "diracgraph/graph.hpp"
#include "diracgraph/transmission.hpp"

namespace diracgraph
{

// A Dirac operator on a metric graph: the graph (with mass) plus the
// transmission conditions A·W·Γ¹Φ = B·W·Γ²Φ.
struct SpectralProblem
{
  MetricGraph graph;
  GlobalConditions conditions;
};

inline SpectralProblem make_problem(MetricGraph g, GlobalConditions c)
{
  if (c.A.rows() != g.boundary_dim())
  {
    throw ConditionError("SizeMismatch: conditions are " + std::to_string(c.A.rows()) + "×" +
                         std::to_string(c.A.cols()) + " but the graph boundary dimension is " +
                         std::to_string(g.boundary_dim()));
  }
  return SpectralProblem{std::move(g), std::move(c)};
}

}  // namespace diracgraph
