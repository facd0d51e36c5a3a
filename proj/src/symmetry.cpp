// SPDX-License-Identifier: Apache-2.0

#include "diracgraph/symmetry.hpp"

#include <utility>

#include "diracgraph/errors.hpp"
#include "diracgraph/transmission.hpp"

namespace diracgraph
{

ParityResult parity_transform(const SpectralProblem& p, const std::vector<EdgeId>& flipped)
{
  FlipResult flip = flip_orientation(p.graph, flipped);
  GlobalConditions conditions = p.conditions;
  conditions.W = conditions.W * flip.S;
  ParityResult out{SpectralProblem{std::move(flip.graph), std::move(conditions)},
                   flip.S.sign()};
  return out;
}

GlobalConditions conjugate_conditions(const GlobalConditions& c)
{
  GlobalConditions out = c;
  out.A = c.A.conjugate();
  out.B = c.B.conjugate();
  return out;
}

GlobalConditions charge_conditions(const MetricGraph& g, const GlobalConditions& c)
{
  const int n = g.boundary_dim();
  if (c.A.rows() != n)
  {
    throw ConditionError("charge_conditions: conditions do not match the graph size");
  }
  Vector vtilde(n);
  for (int j = 0; j < g.num_edges(); j++)
  {
    const Edge& e = g.edges()[static_cast<std::size_t>(j)];
    const int off = g.slot_offset(j);
    if (is_internal(e))
    {
      vtilde(off) = Complex(0.0, 1.0);
      vtilde(off + 1) = Complex(0.0, -1.0);
    }
    else
    {
      const auto& ee = std::get<ExternalEdge>(e);
      vtilde(off) = Complex(0.0, -static_cast<double>(ee.rho));
    }
  }
  const Vector m_diag = c.W.conjugate_diagonal(vtilde);

  GlobalConditions out = c;
  out.A = c.B.conjugate() * m_diag.asDiagonal();
  out.B = c.A.conjugate() * m_diag.asDiagonal();
  return out;
}

bool is_T_symmetric(const GlobalConditions& c)
{
  return relations_equal(c.A, c.B, c.A.conjugate(), c.B.conjugate());
}

bool is_C_symmetric(const MetricGraph& g, const GlobalConditions& c)
{
  const GlobalConditions charged = charge_conditions(g, c);
  return relations_equal(c.A, c.B, charged.A, charged.B);
}

}  // namespace diracgraph
