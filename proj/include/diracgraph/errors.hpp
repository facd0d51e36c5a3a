// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace diracgraph
{

// Base class for all library errors.
class Error : public std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// Invalid graph construction or edge lookup (loops, unknown vertices, bad
// intervals, duplicate ids, isolated vertices, ...).
class GraphError : public Error
{
  using Error::Error;
};

// Invalid transmission-condition data (missing vertex block, size mismatch).
class ConditionError : public Error
{
  using Error::Error;
};

// alpha(z) requested at a branch point z = ±m.
class BranchPointError : public Error
{
  using Error::Error;
};

// An edge-spectral quantity requested at a point of the reference spectrum
// σ(D⁰), where the Q-function / defect basis has a pole or is undefined.
class ReferencePointError : public Error
{
  using Error::Error;
};

// eta_external requested where Im k(z) ≤ 0, i.e. no decaying solution exists.
class NotDecayingError : public Error
{
  using Error::Error;
};

// Oracle characteristic system requested on the essential-spectrum rays of a
// graph with external edges (Im k(z) = 0): no decaying external solution.
class ThresholdRegionError : public Error
{
  using Error::Error;
};

// resolvent_apply requested at z where AW − BWQ(z) is numerically singular.
class NotInResolventSetError : public Error
{
  using Error::Error;
};

// Contour winding could not be stabilized (zero on contour after retries,
// or sampling budget exhausted).
class ContourError : public Error
{
  using Error::Error;
};

// Malformed problem files or CLI arguments; maps to process exit code 1.
class InputError : public Error
{
  using Error::Error;
};

}  // namespace diracgraph
