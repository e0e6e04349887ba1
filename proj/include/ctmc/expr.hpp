#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctmc {

using RateBindings = std::map<std::string, double>;

class EvalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class UnboundSymbolError : public EvalError {
public:
    explicit UnboundSymbolError(const std::string& symbol)
        : EvalError("unbound rate symbol '" + symbol + "'"), symbol_(symbol) {}
    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

class NonFiniteResultError : public EvalError {
    using EvalError::EvalError;
};

// Symbolic expression over rate symbols: constants, symbols, sums, products,
// quotients and reciprocals. Immutable; nodes are shared, so an expression
// built from another references it structurally instead of copying it.
//
// Construction keeps two normal forms and nothing more: nested sums/products
// are flattened, and a quotient by the constant 1 collapses to its numerator.
// Algebraic equality is checked by randomized evaluation (`equivalent`), not
// by rewriting.
class RateExpr {
public:
    enum class Kind { Const, Sym, Sum, Prod, Quot, Recip };

    static RateExpr constant(double value);                  // value >= 0, finite
    static RateExpr symbol(std::string name);                // [A-Za-z_][A-Za-z0-9_]*
    static RateExpr sum(std::vector<RateExpr> terms);        // single term passes through
    static RateExpr product(std::vector<RateExpr> factors);  // single factor passes through
    static RateExpr quotient(RateExpr num, RateExpr den);
    static RateExpr reciprocal(RateExpr inner);

    Kind kind() const;
    double const_value() const;              // Kind::Const only
    const std::string& symbol_name() const;  // Kind::Sym only
    // Sum/Prod: the terms; Quot: {numerator, denominator}; Recip: {inner}.
    std::span<const RateExpr> children() const;

    // Recursive evaluation with a per-call memo keyed on shared nodes.
    // Throws UnboundSymbolError / NonFiniteResultError.
    double evaluate(const RateBindings& bindings) const;

    // Canonical rendering: sum/product children ordered by their rendered
    // text, reciprocals as "(x)^-1", minimal parentheses with precedence
    // Recip > Quot/Prod > Sum. Deterministic; byte-identical across runs.
    std::string render() const;

    // Sorted, de-duplicated symbol names occurring in the expression.
    std::vector<std::string> symbols() const;

private:
    struct Node;
    explicit RateExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    double eval_node(const RateBindings& bindings,
                     std::map<const Node*, double>& memo) const;
    std::string render_node(std::map<const Node*, std::string>& memo) const;
    void collect_symbols(std::map<const Node*, bool>& seen,
                         std::vector<std::string>& out) const;

    std::shared_ptr<const Node> node_;
};

// True iff a and b agree within tol (relative to max(1, |a|)) on `trials`
// random positive bindings drawn log-uniform from [1e-3, 1e3] with the given
// seed. Samples the union of both symbol sets in sorted order.
bool equivalent(const RateExpr& a, const RateExpr& b, int trials = 32,
                std::uint64_t seed = 0, double tol = 1e-9);

}  // namespace ctmc
