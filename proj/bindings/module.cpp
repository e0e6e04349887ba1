#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "ctmc/derive.hpp"
#include "ctmc/expr.hpp"
#include "ctmc/expr_reader.hpp"
#include "ctmc/model.hpp"
#include "ctmc/parser.hpp"
#include "ctmc/simulate.hpp"
#include "ctmc/solve.hpp"
#include "ctmc/structure.hpp"

namespace py = pybind11;
using namespace ctmc;

namespace {

StateId state_id(const Model& m, const std::string& name) {
    auto id = m.find_state(name);
    if (!id) throw py::value_error("unknown state '" + name + "'");
    return *id;
}

}  // namespace

PYBIND11_MODULE(_ctmc, m) {
    m.doc() = "Steady-state availability analysis for closed continuous-time Markov chains";

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<EvalError>(m, "EvalError", PyExc_ValueError);
    py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_ArithmeticError);

    py::class_<Model>(m, "Model")
        .def_property_readonly("name", &Model::name)
        .def_property_readonly("n_states", &Model::state_count)
        .def_property_readonly("root", &Model::root)
        .def_property_readonly("rates", &Model::rate_table)
        .def("state_name", &Model::state_name, py::arg("state"))
        .def("is_up", &Model::is_up, py::arg("state"))
        .def("find_state", &Model::find_state, py::arg("name"))
        .def("transitions",
             [](const Model& model) {
                 std::vector<std::tuple<std::string, std::string, std::string, double>> out;
                 for (const auto& t : model.transitions())
                     out.emplace_back(model.state_name(t.src), model.state_name(t.dst),
                                      t.rate.symbol, t.rate.value);
                 return out;
             })
        .def("rebind", &Model::rebind, py::arg("values"))
        .def("__eq__", [](const Model& a, const Model& b) { return a == b; })
        .def("__repr__", [](const Model& model) {
            return "<Model '" + model.name() + "', " + std::to_string(model.state_count()) +
                   " states, " + std::to_string(model.transitions().size()) + " transitions>";
        });

    m.def("parse_model", [](const std::string& text) {
        ParseResult result = parse_model(text);
        if (auto* error = std::get_if<ParseError>(&result))
            throw py::value_error(error->to_string());
        return std::get<Model>(std::move(result));
    },
          py::arg("text"), "Parse model text; raises ValueError with 'line:col message'.");
    m.def("serialize_model", &serialize_model, py::arg("model"));

    py::class_<GeneratorMatrix>(m, "GeneratorMatrix")
        .def_property_readonly("n", &GeneratorMatrix::size)
        .def("at", py::overload_cast<std::size_t, std::size_t>(&GeneratorMatrix::at, py::const_),
             py::arg("i"), py::arg("j"))
        .def("max_exit_rate", &GeneratorMatrix::max_exit_rate)
        .def("rows", [](const GeneratorMatrix& q) {
            std::vector<std::vector<double>> rows(q.size(), std::vector<double>(q.size()));
            for (std::size_t i = 0; i < q.size(); ++i)
                for (std::size_t j = 0; j < q.size(); ++j) rows[i][j] = q.at(i, j);
            return rows;
        });
    m.def("build_generator", &build_generator, py::arg("model"));

    m.def("exit_rate",
          [](const Model& model, const std::string& state) {
              return exit_rate(model, state_id(model, state));
          },
          py::arg("model"), py::arg("state"));
    m.def("sojourn_time",
          [](const Model& model, const std::string& state) {
              return sojourn_time(model, state_id(model, state));
          },
          py::arg("model"), py::arg("state"));

    py::class_<SteadyState>(m, "SteadyState")
        .def_readonly("pi", &SteadyState::pi)
        .def_readonly("residual", &SteadyState::residual)
        .def_readonly("availability", &SteadyState::availability);
    m.def("solve_steady_state", py::overload_cast<const Model&>(&solve_steady_state),
          py::arg("model"));
    m.def("residual",
          [](const GeneratorMatrix& q, const std::vector<double>& pi) {
              return residual(q, pi);
          },
          py::arg("generator"), py::arg("pi"));
    m.def("availability", &availability, py::arg("model"), py::arg("steady_state"));
    m.def("emit_json", &emit_json, py::arg("steady_state"), py::arg("model"));

    py::class_<Decomposition>(m, "Decomposition")
        .def_readonly("root", &Decomposition::root)
        .def_readonly("order", &Decomposition::order)
        .def_property_readonly("pattern",
                               [](const Decomposition& d) {
                                   return std::string(pattern_name(d.pattern));
                               })
        .def_property_readonly("parent_edge", [](const Decomposition& d) {
            py::list out;
            for (auto e : d.parent_edge)
                out.append(e == Decomposition::npos ? py::object(py::none())
                                                    : py::object(py::int_(e)));
            return out;
        });
    py::class_<UnsupportedStructure>(m, "UnsupportedStructure")
        .def_readonly("violating", &UnsupportedStructure::violating);
    m.def("classify", &classify, py::arg("model"));

    py::class_<RateExpr>(m, "RateExpr")
        .def("render", &RateExpr::render)
        .def("__str__", &RateExpr::render)
        .def("__repr__",
             [](const RateExpr& e) { return "<RateExpr " + e.render() + ">"; })
        .def("evaluate", &RateExpr::evaluate, py::arg("bindings"))
        .def("symbols", &RateExpr::symbols);
    m.def("read_expr", [](const std::string& text) { return read_expr(text); }, py::arg("text"));
    m.def("equivalent", &equivalent, py::arg("a"), py::arg("b"), py::arg("trials") = 32,
          py::arg("seed") = 0, py::arg("tol") = 1e-9);

    py::class_<Derivation>(m, "Derivation")
        .def_readonly("root", &Derivation::root)
        .def_readonly("coeffs", &Derivation::coeffs)
        .def_readonly("pi0", &Derivation::pi0)
        .def_readonly("availability_expr", &Derivation::availability_expr)
        .def("state_probability",
             [](const Derivation& d, StateId k) { return express_state(d, k); },
             py::arg("state"))
        .def("evaluate_pi",
             [](const Derivation& d, const RateBindings& b) { return evaluate_states(d, b); },
             py::arg("bindings"));
    m.def("derive_tree", &derive_tree, py::arg("model"), py::arg("decomposition"));
    m.def("derive",
          [](const Model& model) {
              auto result = classify(model);
              if (auto* bad = std::get_if<UnsupportedStructure>(&result)) {
                  std::string names;
                  for (StateId s : bad->violating) {
                      if (!names.empty()) names += ", ";
                      names += model.state_name(s);
                  }
                  throw py::value_error("unsupported structure; offending: " + names);
              }
              return derive_tree(model, std::get<Decomposition>(result));
          },
          py::arg("model"), "Classify and derive in one step; raises ValueError if unsupported.");
    m.def("express_state", &express_state, py::arg("derivation"), py::arg("state"));
    m.def("evaluate_states", &evaluate_states, py::arg("derivation"), py::arg("bindings"));
    m.def("derive_hub", &derive_hub, py::arg("arrival_symbols"), py::arg("return_symbols"));
    m.def("derive_cycle_rates", &derive_cycle_rates, py::arg("rate_symbols"));
    m.def("derive_cycle_sojourn", &derive_cycle_sojourn, py::arg("sojourns"));

    py::class_<SimEstimate>(m, "SimEstimate")
        .def_readonly("occupancy", &SimEstimate::occupancy)
        .def_readonly("events", &SimEstimate::events)
        .def_readonly("horizon", &SimEstimate::horizon)
        .def_readonly("seed", &SimEstimate::seed);
    m.def("simulate", &simulate, py::arg("model"), py::arg("horizon"), py::arg("seed") = 0);
}
