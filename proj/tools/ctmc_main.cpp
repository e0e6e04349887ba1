// ctmc: analyze closed continuous-time Markov chains from .ctmc model files.
//
// solve     steady state via the generator-matrix linear solver
// derive    closed-form expressions per state (decision/sequential models)
// check     randomized comparison of the closed forms against the solver
// simulate  Monte Carlo occupancy estimate
//
// Exit codes: 0 success, 1 model/usage error, 2 unsupported structure where a
// derivation was required, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctmc/derive.hpp"
#include "ctmc/format.hpp"
#include "ctmc/model.hpp"
#include "ctmc/parser.hpp"
#include "ctmc/rng.hpp"
#include "ctmc/simulate.hpp"
#include "ctmc/solve.hpp"
#include "ctmc/structure.hpp"

namespace {

using namespace ctmc;

constexpr int kExitSuccess = 0;
constexpr int kExitModelError = 1;
constexpr int kExitUnsupported = 2;
constexpr int kExitNumerical = 3;

const char* kGrammar = R"(Model file grammar (one statement per line, '#' comments):

  model IDENT
  root IDENT                       optional; default: first declared state
  state IDENT (up | down)
  rate IDENT = POSITIVE-FLOAT
  trans IDENT -> IDENT : (IDENT | POSITIVE-FLOAT)

States and rates must be declared before use in trans statements. Inline
literal rates are bound to an auto-generated symbol r<src>_<dst>.)";

int load_model(const std::string& path, std::optional<Model>& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open '" << path << "'\n";
        return kExitModelError;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    ParseResult result = parse_model(buf.str());
    if (auto* error = std::get_if<ParseError>(&result)) {
        std::cerr << error->to_string() << "\n";
        return kExitModelError;
    }
    out = std::get<Model>(std::move(result));
    return kExitSuccess;
}

// Returns the decomposition or prints the offending states and fails with
// exit code 2.
int classify_or_report(const Model& model, std::optional<Decomposition>& out) {
    auto result = classify(model);
    if (auto* bad = std::get_if<UnsupportedStructure>(&result)) {
        std::string names;
        for (StateId s : bad->violating) {
            if (!names.empty()) names += ", ";
            names += model.state_name(s);
        }
        std::cerr << "unsupported structure: every non-root state needs exactly one "
                     "incoming transition; offending: "
                  << names << "\nno closed form available; 'solve' still works.\n";
        return kExitUnsupported;
    }
    out = std::get<Decomposition>(std::move(result));
    return kExitSuccess;
}

void print_aligned(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    for (const auto& [k, v] : rows) {
        os << k << std::string(width - k.size() + 2, ' ') << v << "\n";
    }
}

int cmd_solve(const std::string& file, const std::string& format) {
    std::optional<Model> model;
    if (int rc = load_model(file, model)) return rc;
    SteadyState ss;
    try {
        ss = solve_steady_state(*model);
    } catch (const SingularSystemError& e) {
        std::cerr << e.what() << "\n";
        return kExitNumerical;
    }
    if (format == "json") {
        std::cout << emit_json(ss, *model) << "\n";
        return kExitSuccess;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    for (StateId s = 0; s < model->state_count(); ++s)
        rows.emplace_back(model->state_name(s), format_shortest(ss.pi[s]) +
                                                    (model->is_up(s) ? "  up" : "  down"));
    rows.emplace_back("availability", format_shortest(ss.availability));
    rows.emplace_back("residual", format_shortest(ss.residual));
    print_aligned(std::cout, rows);
    return kExitSuccess;
}

int cmd_derive(const std::string& file, const std::string& state, const std::string& format) {
    std::optional<Model> model;
    if (int rc = load_model(file, model)) return rc;
    std::optional<Decomposition> decomp;
    if (int rc = classify_or_report(*model, decomp)) return rc;
    Derivation deriv = derive_tree(*model, *decomp);

    if (!state.empty()) {
        auto id = model->find_state(state);
        if (!id) {
            std::cerr << "unknown state '" << state << "'\n";
            return kExitModelError;
        }
        std::cout << "pi_" << state << " = " << express_state(deriv, *id).render() << "\n";
        return kExitSuccess;
    }

    if (format == "json") {
        std::string out = "{\"pi0\":\"" + json_escape(deriv.pi0.render()) + "\",\"states\":{";
        for (StateId s = 0; s < model->state_count(); ++s) {
            if (s) out += ",";
            out += "\"" + json_escape(model->state_name(s)) + "\":\"" +
                   json_escape(express_state(deriv, s).render()) + "\"";
        }
        std::cout << out << "}}\n";
        return kExitSuccess;
    }
    for (StateId s = 0; s < model->state_count(); ++s)
        std::cout << "pi_" << model->state_name(s) << " = " << express_state(deriv, s).render()
                  << "\n";
    return kExitSuccess;
}

int cmd_check(const std::string& file, int trials, std::uint64_t seed, double tol) {
    std::optional<Model> model;
    if (int rc = load_model(file, model)) return rc;
    std::optional<Decomposition> decomp;
    if (int rc = classify_or_report(*model, decomp)) return rc;
    Derivation deriv = derive_tree(*model, *decomp);

    RngStream rng(seed);
    double worst = 0.0;
    try {
        for (int t = 0; t < trials; ++t) {
            RateBindings bindings;
            for (const auto& [symbol, value] : model->rate_table())
                bindings[symbol] = rng.log_uniform(1e-3, 1e3);
            Model bound = model->rebind(bindings);
            SteadyState oracle = solve_steady_state(bound);
            std::vector<double> closed = evaluate_states(deriv, bindings);
            for (StateId s = 0; s < closed.size(); ++s)
                worst = std::max(worst,
                                 std::fabs(closed[s] - oracle.pi[s]) / std::fabs(oracle.pi[s]));
        }
    } catch (const SingularSystemError& e) {
        std::cerr << e.what() << "\n";
        return kExitNumerical;
    } catch (const EvalError& e) {
        std::cerr << e.what() << "\n";
        return kExitNumerical;
    }
    std::cout << "max relative error " << format_shortest(worst) << " over " << trials
              << " trials (tolerance " << format_shortest(tol) << ")\n";
    if (worst > tol) {
        std::cerr << "closed forms disagree with the linear solver beyond tolerance\n";
        return kExitNumerical;
    }
    return kExitSuccess;
}

int cmd_simulate(const std::string& file, double horizon, std::uint64_t seed,
                 const std::string& format) {
    std::optional<Model> model;
    if (int rc = load_model(file, model)) return rc;
    SimEstimate est = simulate(*model, horizon, seed);
    SteadyState ss = solve_steady_state(*model);
    double deviation = 0.0;
    for (StateId s = 0; s < est.occupancy.size(); ++s)
        deviation = std::max(deviation, std::fabs(est.occupancy[s] - ss.pi[s]));

    if (format == "json") {
        std::string out = "{\"model\":\"" + json_escape(model->name()) + "\",\"occupancy\":{";
        for (StateId s = 0; s < model->state_count(); ++s) {
            if (s) out += ",";
            out += "\"" + json_escape(model->state_name(s)) +
                   "\":" + format_sig17(est.occupancy[s]);
        }
        out += "},\"events\":" + std::to_string(est.events);
        out += ",\"horizon\":" + format_sig17(est.horizon);
        out += ",\"seed\":" + std::to_string(est.seed);
        out += ",\"max_deviation\":" + format_sig17(deviation) + "}";
        std::cout << out << "\n";
        return kExitSuccess;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    for (StateId s = 0; s < model->state_count(); ++s)
        rows.emplace_back(model->state_name(s), format_shortest(est.occupancy[s]));
    rows.emplace_back("events", std::to_string(est.events));
    rows.emplace_back("horizon", format_shortest(est.horizon));
    rows.emplace_back("seed", std::to_string(est.seed));
    rows.emplace_back("max|occupancy-pi|", format_shortest(deviation));
    print_aligned(std::cout, rows);
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state analysis of closed continuous-time Markov chains"};
    app.require_subcommand(1);
    app.footer(kGrammar);

    int rc = kExitSuccess;

    auto* solve = app.add_subcommand("solve", "Steady state via the generator-matrix solver");
    std::string solve_file, solve_format = "table";
    solve->add_option("file", solve_file, "model file (.ctmc)")->required();
    solve->add_option("--format", solve_format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    solve->callback([&] { rc = cmd_solve(solve_file, solve_format); });

    auto* derive = app.add_subcommand("derive", "Closed-form expressions per state");
    std::string derive_file, derive_state, derive_format = "text";
    derive->add_option("file", derive_file, "model file (.ctmc)")->required();
    derive->add_option("--state", derive_state, "only this state");
    derive->add_option("--format", derive_format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    derive->callback([&] { rc = cmd_derive(derive_file, derive_state, derive_format); });

    auto* check =
        app.add_subcommand("check", "Compare closed forms against the solver on random rates");
    std::string check_file;
    int check_trials = 100;
    std::uint64_t check_seed = 0;
    double check_tol = 1e-9;
    check->add_option("file", check_file, "model file (.ctmc)")->required();
    check->add_option("--trials", check_trials, "random rate assignments")
        ->check(CLI::PositiveNumber);
    check->add_option("--seed", check_seed, "RNG seed");
    check->add_option("--tol", check_tol, "max relative error accepted")
        ->check(CLI::PositiveNumber);
    check->callback([&] { rc = cmd_check(check_file, check_trials, check_seed, check_tol); });

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo occupancy estimate");
    std::string sim_file, sim_format = "table";
    double sim_horizon = 0.0;
    std::uint64_t sim_seed = 0;
    simulate->add_option("file", sim_file, "model file (.ctmc)")->required();
    simulate->add_option("--horizon", sim_horizon, "total simulated time")
        ->required()
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_seed, "RNG seed");
    simulate->add_option("--format", sim_format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    simulate->callback([&] { rc = cmd_simulate(sim_file, sim_horizon, sim_seed, sim_format); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitModelError;
    }
    return rc;
}
