#pragma once

#include <string>
#include <vector>

#include "ctmc/expr.hpp"
#include "ctmc/model.hpp"
#include "ctmc/structure.hpp"

namespace ctmc {

// Closed-form steady state of a classified model: every state's probability
// expressed as pi_k = coeffs[k] * pi0, with pi0 the reciprocal of the
// coefficient sum. Coefficients share subexpressions with their parents, so
// the whole derivation stays linear in the model size.
struct Derivation {
    StateId root = 0;
    std::vector<RateExpr> coeffs;  // per state; coeffs[root] is the constant 1
    RateExpr pi0;                  // reciprocal of the sum of all coefficients
    RateExpr availability_expr;    // (sum of up coefficients) / (sum of all)
};

// Forward propagation over the decomposition: each non-root state k with
// unique incoming transition p -> k satisfies
//   pi_k * exit_rate(k) = rate(p -> k) * pi_p,
// so c_k = c_p * rate(p -> k) / exit_rate(k), walking parents before
// children. The root's own balance equation is redundant and replaced by
// normalization.
Derivation derive_tree(const Model& model, const Decomposition& d);

// Absolute probability of state k: coeffs[k] * pi0 (pi0 itself for the root).
RateExpr express_state(const Derivation& deriv, StateId k);

// Numeric steady state of the derivation at the given rate bindings.
std::vector<double> evaluate_states(const Derivation& deriv, const RateBindings& bindings);

// Closed form for a hub: root state 0 with arrivals lambda_i to satellite
// i+1 and returns mu_i. Returns (1 + sum_i lambda_i / mu_i)^-1.
RateExpr derive_hub(const std::vector<std::string>& arrival_symbols,
                    const std::vector<std::string>& return_symbols);

// Closed form for a single cycle through the root with rates lambda_0..m:
// (1 + lambda_0 * sum_{i>=1} 1/lambda_i)^-1. The sum starts at i = 1; the
// first rate enters only as the leading factor.
RateExpr derive_cycle_rates(const std::vector<std::string>& rate_symbols);

// Root occupancy of a cycle given expected sojourn times: E[tau_0] / sum E[tau_i].
// Equals derive_cycle_rates evaluated at lambda_i = 1 / E[tau_i].
double derive_cycle_sojourn(const std::vector<double>& sojourns);

}  // namespace ctmc
