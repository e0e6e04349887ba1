#pragma once

#include <span>
#include <stdexcept>

#include "ctmc/model.hpp"

namespace ctmc {

// Raised when the balance system has no unique solution (the chain is
// reducible). Unreachable for valid, strongly connected models; reaching it
// signals a modeling bug.
class SingularSystemError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ground-truth steady state: solve pi * Q = 0, sum(pi) = 1 by state-reduction
// elimination (GTH). States are folded away from the highest index down; every
// update adds non-negative terms, so even probabilities hundreds of orders of
// magnitude apart keep full relative accuracy, and no pivoting is needed. The
// result is renormalized and carries the max-norm residual of pi * Q.
//
// The bare-matrix overload counts every state as up (availability 1); solving
// from a Model fills availability from its up flags.
SteadyState solve_steady_state(const GeneratorMatrix& q);
SteadyState solve_steady_state(const Model& model);

// Max-norm of pi * Q.
double residual(const GeneratorMatrix& q, std::span<const double> pi);

}  // namespace ctmc
