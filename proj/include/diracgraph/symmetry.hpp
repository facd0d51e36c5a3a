// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "diracgraph/problem.hpp"

namespace diracgraph
{

// Parity transform: reverse the orientation of the listed edges, keep the
// condition matrices, and replace the numbering permutation by W·S.  The
// characteristic functions of the two problems differ exactly by the factor
// sign = det S = (-1)^{#flipped internal edges} — orientation is a gauge
// choice, so the zero set (the spectrum) is unchanged.
struct ParityResult
{
  SpectralProblem problem;
  int sign = 1;
};

ParityResult parity_transform(const SpectralProblem& p, const std::vector<EdgeId>& flipped);

// Conditions of the time-reversed problem (T = componentwise complex
// conjugation, which commutes with the Dirac differential expression).  An
// eigenfunction at z maps to an eigenfunction at z̄ of this problem.
GlobalConditions conjugate_conditions(const GlobalConditions& c);

// Conditions of the charge-conjugated problem (C = σ₁ ∘ conjugation, which
// anticommutes with the Dirac differential expression).  An eigenfunction at
// z maps to an eigenfunction at -z̄ of this problem.  The boundary traces
// transform through the diagonal multiplier Ṽ with entries (i, -i) on each
// internal edge's slots and -iρ on each external slot, giving the pair
// (conj(B)·M, conj(A)·M) with M = W·Ṽ·W⁻¹.
GlobalConditions charge_conditions(const MetricGraph& g, const GlobalConditions& c);

// T-symmetry: the conjugated conditions define the same relation, hence the
// point spectrum is closed under z ↦ z̄.  Real A and B are always T-symmetric.
bool is_T_symmetric(const GlobalConditions& c);

// C-symmetry: the charge-conjugated conditions define the same relation,
// hence the point spectrum is closed under z ↦ -z̄.
bool is_C_symmetric(const MetricGraph& g, const GlobalConditions& c);

}  // namespace diracgraph
