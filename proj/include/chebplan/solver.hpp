#pragma once

#include "chebplan/nlp.hpp"

namespace chebplan {

// Augmented-Lagrangian solve with a projected quasi-Newton inner loop and
// derivatives from forward-mode duals. warm seeds both the primal point and
// the multiplier estimates from the guess; cold zeroes the multipliers.
// Iteration limits never throw: status kMaxIter returns the best iterate.
// Evaluation faults or NaNs in the problem functions return
// kInfeasibleDetected with the last safe iterate.
PlanSolution solve(const NlpProblem& p, const NlpGuess& guess, bool warm);

}  // namespace chebplan
