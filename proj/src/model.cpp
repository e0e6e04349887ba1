#include "ctmc/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ctmc/format.hpp"

namespace ctmc {

std::optional<StateId> Model::find_state(std::string_view name) const {
    for (StateId i = 0; i < state_names_.size(); ++i)
        if (state_names_[i] == name) return i;
    return std::nullopt;
}

std::span<const Transition> Model::outgoing(StateId s) const {
    if (s >= state_count()) throw std::out_of_range("state id out of range");
    return {transitions_.data() + out_begin_[s], out_begin_[s + 1] - out_begin_[s]};
}

Model Model::rebind(const std::map<std::string, double>& values) const {
    Model m = *this;
    for (auto& [symbol, value] : m.rates_) {
        auto it = values.find(symbol);
        if (it == values.end())
            throw ModelError(ModelFault::ConflictingRate, symbol,
                             "no binding provided for rate '" + symbol + "'");
        if (!(it->second > 0.0) || !std::isfinite(it->second))
            throw ModelError(ModelFault::NonPositiveRate, symbol,
                             "rate '" + symbol + "' must be positive");
        value = it->second;
    }
    for (auto& t : m.transitions_) t.rate.value = m.rates_.at(t.rate.symbol);
    return m;
}

// ---------------------------------------------------------------------------

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty()) return false;
    auto head = static_cast<unsigned char>(s[0]);
    if (!std::isalpha(head) && s[0] != '_') return false;
    return std::all_of(s.begin() + 1, s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

}  // namespace

ModelBuilder::ModelBuilder(std::string model_name) { model_.name_ = std::move(model_name); }

StateId ModelBuilder::require_state(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw ModelError(ModelFault::UnknownState, name, "unknown state '" + name + "'");
    return it->second;
}

StateId ModelBuilder::add_state(const std::string& name, bool up) {
    if (!is_identifier(name)) throw std::invalid_argument("invalid state name '" + name + "'");
    if (index_.count(name))
        throw ModelError(ModelFault::DuplicateState, name, "duplicate state '" + name + "'");
    StateId id = model_.state_names_.size();
    model_.state_names_.push_back(name);
    model_.up_.push_back(up);
    index_.emplace(name, id);
    return id;
}

void ModelBuilder::add_transition(const std::string& src, const std::string& dst,
                                  const std::string& rate_symbol, double rate_value) {
    StateId s = require_state(src);
    StateId d = require_state(dst);
    if (s == d)
        throw ModelError(ModelFault::SelfLoop, dst, "self-loop " + src + " -> " + dst);
    for (const auto& t : model_.transitions_)
        if (t.src == s && t.dst == d)
            throw ModelError(ModelFault::DuplicateTransition, src,
                             "duplicate transition " + src + " -> " + dst);
    if (!is_identifier(rate_symbol))
        throw std::invalid_argument("invalid rate symbol '" + rate_symbol + "'");
    if (!(rate_value > 0.0) || !std::isfinite(rate_value))
        throw ModelError(ModelFault::NonPositiveRate, rate_symbol,
                         "rate must be positive (got " + format_shortest(rate_value) + ")");
    auto it = model_.rates_.find(rate_symbol);
    if (it != model_.rates_.end() && it->second != rate_value)
        throw ModelError(ModelFault::ConflictingRate, rate_symbol,
                         "conflicting values bound to rate '" + rate_symbol + "'");
    model_.rates_.emplace(rate_symbol, rate_value);
    model_.transitions_.push_back({s, d, {rate_symbol, rate_value}});
}

void ModelBuilder::set_root(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end())
        throw ModelError(ModelFault::NoRoot, name, "root state '" + name + "' not declared");
    model_.root_ = it->second;
}

Model ModelBuilder::build() {
    if (built_) throw std::logic_error("ModelBuilder::build called twice");
    built_ = true;

    const std::size_t n = model_.state_names_.size();
    if (n == 0)
        throw ModelError(ModelFault::NoRoot, "", "model declares no states");

    std::sort(model_.transitions_.begin(), model_.transitions_.end(),
              [](const Transition& a, const Transition& b) {
                  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
              });
    model_.out_begin_.assign(n + 1, 0);
    for (const auto& t : model_.transitions_) ++model_.out_begin_[t.src + 1];
    for (std::size_t i = 0; i < n; ++i) model_.out_begin_[i + 1] += model_.out_begin_[i];

    for (StateId s = 0; s < n; ++s)
        if (model_.out_begin_[s + 1] == model_.out_begin_[s])
            throw ModelError(ModelFault::AbsorbingState, model_.state_names_[s],
                             "state '" + model_.state_names_[s] + "' has no outgoing transitions");

    // strong connectivity: every state reachable from root and vice versa
    auto reach = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::deque<StateId> queue{model_.root_};
        seen[model_.root_] = true;
        while (!queue.empty()) {
            StateId s = queue.front();
            queue.pop_front();
            for (const auto& t : model_.transitions_) {
                StateId from = forward ? t.src : t.dst;
                StateId to = forward ? t.dst : t.src;
                if (from == s && !seen[to]) {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        return seen;
    };
    auto fwd = reach(true);
    auto bwd = reach(false);
    const std::string root_name = model_.state_names_[model_.root_];
    for (StateId s = 0; s < n; ++s) {
        if (!fwd[s])
            throw ModelError(ModelFault::NotStronglyConnected, model_.state_names_[s],
                             "state '" + model_.state_names_[s] + "' is not reachable from root '" +
                                 root_name + "'");
        if (!bwd[s])
            throw ModelError(ModelFault::NotStronglyConnected, model_.state_names_[s],
                             "state '" + model_.state_names_[s] + "' cannot reach root '" +
                                 root_name + "'");
    }

    return std::move(model_);
}

// ---------------------------------------------------------------------------

double GeneratorMatrix::max_exit_rate() const {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) m = std::max(m, -at(i, i));
    return m;
}

GeneratorMatrix build_generator(const Model& model) {
    const std::size_t n = model.state_count();
    GeneratorMatrix q(n);
    for (const auto& t : model.transitions()) q.at(t.src, t.dst) = t.rate.value;
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) total += q.at(i, j);
        q.at(i, i) = -total;
    }
    return q;
}

double exit_rate(const Model& model, StateId s) {
    double total = 0.0;
    for (const auto& t : model.outgoing(s)) total += t.rate.value;
    return total;
}

double sojourn_time(const Model& model, StateId s) { return 1.0 / exit_rate(model, s); }

double availability(const Model& model, const SteadyState& ss) {
    if (ss.pi.size() != model.state_count())
        throw std::invalid_argument("steady state and model disagree on the state count");
    double total = 0.0;
    for (StateId s = 0; s < ss.pi.size(); ++s)
        if (model.is_up(s)) total += ss.pi[s];
    return total;
}

}  // namespace ctmc
