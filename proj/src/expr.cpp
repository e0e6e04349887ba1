#include "ctmc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ctmc/format.hpp"
#include "ctmc/rng.hpp"

namespace ctmc {

struct RateExpr::Node {
    Kind kind = Kind::Const;
    double value = 0.0;          // Const
    std::string name;            // Sym
    std::vector<RateExpr> kids;  // Sum/Prod terms, Quot {num, den}, Recip {inner}
};

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

}  // namespace

RateExpr RateExpr::constant(double value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument("expression constants must be finite and non-negative");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = value;
    return RateExpr(std::move(n));
}

RateExpr RateExpr::symbol(std::string name) {
    if (!is_identifier(name))
        throw std::invalid_argument("invalid rate symbol '" + name + "'");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sym;
    n->name = std::move(name);
    return RateExpr(std::move(n));
}

RateExpr RateExpr::sum(std::vector<RateExpr> terms) {
    if (terms.empty()) throw std::invalid_argument("sum requires at least one term");
    if (terms.size() == 1) return std::move(terms.front());
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    for (auto& t : terms) {
        if (t.kind() == Kind::Sum) {
            auto kids = t.children();
            n->kids.insert(n->kids.end(), kids.begin(), kids.end());
        } else {
            n->kids.push_back(std::move(t));
        }
    }
    return RateExpr(std::move(n));
}

RateExpr RateExpr::product(std::vector<RateExpr> factors) {
    if (factors.empty()) throw std::invalid_argument("product requires at least one factor");
    if (factors.size() == 1) return std::move(factors.front());
    auto n = std::make_shared<Node>();
    n->kind = Kind::Prod;
    for (auto& f : factors) {
        if (f.kind() == Kind::Prod) {
            auto kids = f.children();
            n->kids.insert(n->kids.end(), kids.begin(), kids.end());
        } else {
            n->kids.push_back(std::move(f));
        }
    }
    return RateExpr(std::move(n));
}

RateExpr RateExpr::quotient(RateExpr num, RateExpr den) {
    if (den.kind() == Kind::Const) {
        if (den.const_value() == 0.0)
            throw std::invalid_argument("quotient denominator is the constant 0");
        if (den.const_value() == 1.0) return num;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Quot;
    n->kids.push_back(std::move(num));
    n->kids.push_back(std::move(den));
    return RateExpr(std::move(n));
}

RateExpr RateExpr::reciprocal(RateExpr inner) {
    if (inner.kind() == Kind::Const && inner.const_value() == 0.0)
        throw std::invalid_argument("reciprocal of the constant 0");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Recip;
    n->kids.push_back(std::move(inner));
    return RateExpr(std::move(n));
}

RateExpr::Kind RateExpr::kind() const { return node_->kind; }

double RateExpr::const_value() const {
    if (node_->kind != Kind::Const) throw std::logic_error("not a constant");
    return node_->value;
}

const std::string& RateExpr::symbol_name() const {
    if (node_->kind != Kind::Sym) throw std::logic_error("not a symbol");
    return node_->name;
}

std::span<const RateExpr> RateExpr::children() const {
    return {node_->kids.data(), node_->kids.size()};
}

// ---------------------------------------------------------------------------
// evaluation

double RateExpr::eval_node(const RateBindings& bindings,
                           std::map<const Node*, double>& memo) const {
    const Node* n = node_.get();
    if (auto it = memo.find(n); it != memo.end()) return it->second;

    double v = 0.0;
    switch (n->kind) {
        case Kind::Const:
            v = n->value;
            break;
        case Kind::Sym: {
            auto it = bindings.find(n->name);
            if (it == bindings.end()) throw UnboundSymbolError(n->name);
            v = it->second;
            break;
        }
        case Kind::Sum:
            for (const auto& k : n->kids) v += k.eval_node(bindings, memo);
            break;
        case Kind::Prod:
            v = 1.0;
            for (const auto& k : n->kids) v *= k.eval_node(bindings, memo);
            break;
        case Kind::Quot: {
            double num = n->kids[0].eval_node(bindings, memo);
            double den = n->kids[1].eval_node(bindings, memo);
            if (den == 0.0) throw NonFiniteResultError("quotient denominator evaluated to 0");
            v = num / den;
            break;
        }
        case Kind::Recip: {
            double inner = n->kids[0].eval_node(bindings, memo);
            if (inner == 0.0) throw NonFiniteResultError("reciprocal of a value that evaluated to 0");
            v = 1.0 / inner;
            break;
        }
    }
    if (!std::isfinite(v)) throw NonFiniteResultError("expression evaluated to a non-finite value");
    memo.emplace(n, v);
    return v;
}

double RateExpr::evaluate(const RateBindings& bindings) const {
    std::map<const Node*, double> memo;
    return eval_node(bindings, memo);
}

// ---------------------------------------------------------------------------
// rendering

namespace {

// precedence: Sum < Prod/Quot < Recip < atoms
enum Prec { PrecSum = 0, PrecTerm = 1, PrecExp = 2, PrecAtom = 3 };

Prec prec_of(RateExpr::Kind k) {
    switch (k) {
        case RateExpr::Kind::Sum: return PrecSum;
        case RateExpr::Kind::Prod:
        case RateExpr::Kind::Quot: return PrecTerm;
        case RateExpr::Kind::Recip: return PrecExp;
        default: return PrecAtom;
    }
}

std::string render_const(double v) {
    if (v == std::rint(v) && std::fabs(v) < 1e15)
        return std::to_string(static_cast<long long>(v));
    return format_shortest(v);
}

}  // namespace

std::string RateExpr::render_node(std::map<const Node*, std::string>& memo) const {
    const Node* n = node_.get();
    if (auto it = memo.find(n); it != memo.end()) return it->second;

    auto wrapped = [&](const RateExpr& child, bool parens) {
        std::string s = child.render_node(memo);
        return parens ? "(" + s + ")" : s;
    };

    std::string out;
    switch (n->kind) {
        case Kind::Const:
            out = render_const(n->value);
            break;
        case Kind::Sym:
            out = n->name;
            break;
        case Kind::Sum: {
            std::vector<std::string> parts;
            parts.reserve(n->kids.size());
            for (const auto& k : n->kids) parts.push_back(k.render_node(memo));
            std::sort(parts.begin(), parts.end());
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) out += " + ";
                out += parts[i];
            }
            break;
        }
        case Kind::Prod: {
            std::vector<std::string> parts;
            parts.reserve(n->kids.size());
            for (const auto& k : n->kids)
                parts.push_back(wrapped(k, prec_of(k.kind()) < PrecTerm));
            std::sort(parts.begin(), parts.end());
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) out += "*";
                out += parts[i];
            }
            break;
        }
        case Kind::Quot: {
            const auto& num = n->kids[0];
            const auto& den = n->kids[1];
            out = wrapped(num, prec_of(num.kind()) < PrecTerm);
            out += "/";
            // a/b/c and a/b*c both bind left, so any Quot/Prod denominator needs parens
            out += wrapped(den, prec_of(den.kind()) <= PrecTerm);
            break;
        }
        case Kind::Recip: {
            const auto& inner = n->kids[0];
            out = wrapped(inner, prec_of(inner.kind()) < PrecAtom);
            out += "^-1";
            break;
        }
    }
    memo.emplace(n, out);
    return out;
}

std::string RateExpr::render() const {
    std::map<const Node*, std::string> memo;
    return render_node(memo);
}

// ---------------------------------------------------------------------------
// symbol collection and randomized equivalence

void RateExpr::collect_symbols(std::map<const Node*, bool>& seen,
                               std::vector<std::string>& out) const {
    const Node* n = node_.get();
    if (seen.count(n)) return;
    seen.emplace(n, true);
    if (n->kind == Kind::Sym) out.push_back(n->name);
    for (const auto& k : n->kids) k.collect_symbols(seen, out);
}

std::vector<std::string> RateExpr::symbols() const {
    std::map<const Node*, bool> seen;
    std::vector<std::string> out;
    collect_symbols(seen, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool equivalent(const RateExpr& a, const RateExpr& b, int trials, std::uint64_t seed,
                double tol) {
    if (trials < 1) throw std::invalid_argument("equivalent requires trials >= 1");

    std::vector<std::string> names = a.symbols();
    for (auto& s : b.symbols()) names.push_back(s);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    RngStream rng(seed);
    for (int t = 0; t < trials; ++t) {
        RateBindings bindings;
        for (const auto& name : names) bindings[name] = rng.log_uniform(1e-3, 1e3);
        double va = a.evaluate(bindings);
        double vb = b.evaluate(bindings);
        if (std::fabs(va - vb) > tol * std::max(1.0, std::fabs(va))) return false;
    }
    return true;
}

}  // namespace ctmc
