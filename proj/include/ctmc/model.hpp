#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctmc {

using StateId = std::size_t;

// A transition rate: a symbol name bound to a strictly positive value
// (events per unit time).
struct RateBinding {
    std::string symbol;
    double value = 0.0;

    bool operator==(const RateBinding&) const = default;
};

struct Transition {
    StateId src = 0;
    StateId dst = 0;
    RateBinding rate;

    bool operator==(const Transition&) const = default;
};

enum class ModelFault {
    DuplicateState,
    DuplicateTransition,
    UnknownState,
    ConflictingRate,
    NonPositiveRate,
    SelfLoop,
    NoRoot,
    NotStronglyConnected,
    AbsorbingState,
};

class ModelError : public std::runtime_error {
public:
    ModelError(ModelFault fault, std::string subject, const std::string& message)
        : std::runtime_error(message), fault_(fault), subject_(std::move(subject)) {}
    ModelFault fault() const { return fault_; }
    // The offending state or rate name, when one exists.
    const std::string& subject() const { return subject_; }

private:
    ModelFault fault_;
    std::string subject_;
};

// A closed continuous-time Markov chain: named states tagged up/down,
// positive-rate transitions, and a designated root state. Validated on
// construction (no self-loops, no duplicate edges, no absorbing states,
// strongly connected) and immutable afterwards.
class Model {
public:
    const std::string& name() const { return name_; }
    std::size_t state_count() const { return state_names_.size(); }
    const std::string& state_name(StateId s) const { return state_names_.at(s); }
    bool is_up(StateId s) const { return up_.at(s); }
    StateId root() const { return root_; }
    std::optional<StateId> find_state(std::string_view name) const;

    // All transitions, sorted by (src, dst).
    std::span<const Transition> transitions() const { return transitions_; }
    // Outgoing transitions of s, sorted by dst.
    std::span<const Transition> outgoing(StateId s) const;

    // Rate symbol table: symbol name -> bound value.
    const std::map<std::string, double>& rate_table() const { return rates_; }

    // Same structure with every rate symbol rebound to a new positive value.
    // `values` must cover every symbol of the model.
    Model rebind(const std::map<std::string, double>& values) const;

    bool operator==(const Model&) const = default;

private:
    friend class ModelBuilder;
    Model() = default;

    std::string name_;
    std::vector<std::string> state_names_;
    std::vector<bool> up_;
    StateId root_ = 0;
    std::vector<Transition> transitions_;  // sorted by (src, dst)
    std::vector<std::size_t> out_begin_;   // per-state offsets into transitions_
    std::map<std::string, double> rates_;
};

// Incremental construction with validation. Structural faults raise
// ModelError at the offending call; graph-level faults (absorbing states,
// connectivity) raise from build(). The first declared state is the root
// unless set_root is called.
class ModelBuilder {
public:
    explicit ModelBuilder(std::string model_name);

    StateId add_state(const std::string& name, bool up);
    void add_transition(const std::string& src, const std::string& dst,
                        const std::string& rate_symbol, double rate_value);
    void set_root(const std::string& name);

    Model build();

private:
    StateId require_state(const std::string& name) const;

    Model model_;
    std::map<std::string, StateId, std::less<>> index_;
    bool built_ = false;
};

// ---------------------------------------------------------------------------
// generator matrix

// Dense infinitesimal generator. Off-diagonal entry (i, j) is the rate of
// i -> j; the diagonal is set so every row sums to zero.
class GeneratorMatrix {
public:
    explicit GeneratorMatrix(std::size_t n) : n_(n), q_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return q_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) { return q_[i * n_ + j]; }

    // Largest total exit rate, max_i -q(i,i). Residual tolerances scale by it.
    double max_exit_rate() const;

private:
    std::size_t n_;
    std::vector<double> q_;
};

GeneratorMatrix build_generator(const Model& model);

// Total outgoing rate of s.
double exit_rate(const Model& model, StateId s);

// Expected holding time of s: 1 / exit_rate.
double sojourn_time(const Model& model, StateId s);

// ---------------------------------------------------------------------------
// steady state

struct SteadyState {
    std::vector<double> pi;     // stationary probability per state
    double residual = 0.0;      // max-norm of pi * Q
    double availability = 1.0;  // sum of pi over up states
};

// Sum of ss.pi over the model's up states.
double availability(const Model& model, const SteadyState& ss);

}  // namespace ctmc
