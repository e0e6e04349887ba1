#include "ctmc/derive.hpp"

#include <optional>
#include <stdexcept>

namespace ctmc {

namespace {

RateExpr exit_rate_expr(const Model& model, StateId s) {
    std::vector<RateExpr> terms;
    for (const auto& t : model.outgoing(s)) terms.push_back(RateExpr::symbol(t.rate.symbol));
    return RateExpr::sum(std::move(terms));
}

bool is_const_one(const RateExpr& e) {
    return e.kind() == RateExpr::Kind::Const && e.const_value() == 1.0;
}

}  // namespace

Derivation derive_tree(const Model& model, const Decomposition& d) {
    const std::size_t n = model.state_count();
    if (d.parent_edge.size() != n || d.order.size() + 1 != n)
        throw std::invalid_argument("decomposition does not match the model");

    std::vector<std::optional<RateExpr>> coeffs(n);
    coeffs[d.root] = RateExpr::constant(1.0);

    for (StateId k : d.order) {
        const Transition& in = model.transitions()[d.parent_edge[k]];
        RateExpr inflow = RateExpr::symbol(in.rate.symbol);
        const RateExpr& parent = *coeffs[in.src];
        RateExpr numerator =
            is_const_one(parent) ? std::move(inflow)
                                 : RateExpr::product({parent, std::move(inflow)});
        coeffs[k] = RateExpr::quotient(std::move(numerator), exit_rate_expr(model, k));
    }

    std::vector<RateExpr> all;
    all.reserve(n);
    for (StateId s = 0; s < n; ++s) all.push_back(*coeffs[s]);

    RateExpr total = RateExpr::sum(all);

    std::vector<RateExpr> ups;
    for (StateId s = 0; s < n; ++s)
        if (model.is_up(s)) ups.push_back(all[s]);
    RateExpr up_sum = ups.empty() ? RateExpr::constant(0.0) : RateExpr::sum(std::move(ups));

    return Derivation{
        d.root,
        std::move(all),
        RateExpr::reciprocal(total),
        RateExpr::quotient(std::move(up_sum), total),
    };
}

RateExpr express_state(const Derivation& deriv, StateId k) {
    if (k >= deriv.coeffs.size()) throw std::out_of_range("state id out of range");
    if (k == deriv.root) return deriv.pi0;
    return RateExpr::product({deriv.coeffs[k], deriv.pi0});
}

std::vector<double> evaluate_states(const Derivation& deriv, const RateBindings& bindings) {
    std::vector<double> values(deriv.coeffs.size());
    double total = 0.0;
    for (std::size_t k = 0; k < deriv.coeffs.size(); ++k) {
        values[k] = deriv.coeffs[k].evaluate(bindings);
        total += values[k];
    }
    for (double& v : values) v /= total;
    return values;
}

RateExpr derive_hub(const std::vector<std::string>& arrival_symbols,
                    const std::vector<std::string>& return_symbols) {
    if (arrival_symbols.empty() || arrival_symbols.size() != return_symbols.size())
        throw std::invalid_argument("hub needs matching, non-empty arrival and return lists");
    std::vector<RateExpr> terms{RateExpr::constant(1.0)};
    for (std::size_t i = 0; i < arrival_symbols.size(); ++i)
        terms.push_back(RateExpr::quotient(RateExpr::symbol(arrival_symbols[i]),
                                           RateExpr::symbol(return_symbols[i])));
    return RateExpr::reciprocal(RateExpr::sum(std::move(terms)));
}

RateExpr derive_cycle_rates(const std::vector<std::string>& rate_symbols) {
    if (rate_symbols.size() < 2)
        throw std::invalid_argument("a cycle needs at least two rates");
    std::vector<RateExpr> inverses;
    for (std::size_t i = 1; i < rate_symbols.size(); ++i)
        inverses.push_back(RateExpr::reciprocal(RateExpr::symbol(rate_symbols[i])));
    RateExpr walk = RateExpr::product(
        {RateExpr::symbol(rate_symbols[0]), RateExpr::sum(std::move(inverses))});
    return RateExpr::reciprocal(RateExpr::sum({RateExpr::constant(1.0), std::move(walk)}));
}

double derive_cycle_sojourn(const std::vector<double>& sojourns) {
    if (sojourns.size() < 2)
        throw std::invalid_argument("a cycle needs at least two sojourn times");
    double total = 0.0;
    for (double s : sojourns) {
        if (!(s > 0.0)) throw std::invalid_argument("sojourn times must be positive");
        total += s;
    }
    return sojourns.front() / total;
}

}  // namespace ctmc
