#pragma once

#include <vector>

#include "polext/numerics.hpp"

namespace polext::lp {

enum class LpStatus { Optimal, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  numerics::Vector y;
  int pivots = 0;
};

/// maximize c.y  subject to  A y <= b, y >= 0, for b >= 0 (so y = 0 is a
/// feasible starting vertex and no phase one is needed). Dense tableau with
/// Bland's rule; throws SolverError if the pivot guard is exhausted or b has a
/// negative entry.
LpResult maximize(const numerics::Matrix& a, const numerics::Vector& b,
                  const numerics::Vector& c);

}  // namespace polext::lp
