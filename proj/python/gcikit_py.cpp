#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "gcikit/aggregation.hpp"
#include "gcikit/errors.hpp"
#include "gcikit/io.hpp"
#include "gcikit/ranking.hpp"
#include "gcikit/report.hpp"
#include "gcikit/stats.hpp"
#include "gcikit/whatif.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace gcikit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Composite competitiveness index engine";

    static py::exception<Error> error(m, "GcikitError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::enum_<InnovatorClass>(m, "InnovatorClass")
        .value("Core", InnovatorClass::Core)
        .value("NonCore", InnovatorClass::NonCore);
    py::enum_<MissingPolicy>(m, "MissingPolicy")
        .value("Strict", MissingPolicy::Strict)
        .value("Renormalize", MissingPolicy::Renormalize);
    py::enum_<Decision>(m, "Decision").value("Reject", Decision::Reject).value("DoNotReject", Decision::DoNotReject);

    py::class_<IndexTree>(m, "IndexTree")
        .def_property_readonly("root", &IndexTree::root)
        .def("node_ids", &IndexTree::reachable_ids)
        .def("leaves", &IndexTree::reachable_leaves, "cls"_a)
        .def("weights", [](const IndexTree& t, const std::string& id, InnovatorClass cls) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& c : t.node(id).children_for(cls)) out.emplace_back(c.id, c.weight.to_string());
            return out;
        }, "node"_a, "cls"_a, "Children of a node with their weights as 'p/q' strings")
        .def("path_weight", [](const IndexTree& t, const std::string& descendant, InnovatorClass cls) {
            return t.path_weight(descendant, t.root(), cls).to_string();
        }, "node"_a, "cls"_a)
        .def("to_json", &tree_to_json)
        .def("__eq__", [](const IndexTree& a, const IndexTree& b) { return a == b; });

    m.def("default_wef_tree", &default_wef_tree);
    m.def("load_tree", &load_tree, "spec"_a = std::string(kDefaultTreeName));
    m.def("parse_tree_json", &parse_tree_json, "text"_a);

    py::class_<Panel>(m, "Panel")
        .def(py::init([](const std::vector<std::tuple<int, std::string, std::string, double>>& rows,
                         const std::map<std::string, InnovatorClass>& classes) {
                 std::vector<Observation> obs;
                 for (const auto& [y, c, i, v] : rows) obs.push_back({y, c, i, v});
                 return Panel(std::move(obs), ClassMap(classes.begin(), classes.end()));
             }),
             "observations"_a, "classes"_a)
        .def_property_readonly("years", &Panel::years)
        .def("countries", &Panel::countries, "year"_a)
        .def("value", &Panel::value, "year"_a, "country"_a, "indicator"_a)
        .def_property_readonly("classes", &Panel::classes);

    m.def("load_classes", &load_classes, "path"_a);
    m.def("load_panel", &load_panel, "path"_a, "classes"_a);

    py::class_<ScoreTable>(m, "ScoreTable")
        .def(py::init<>())
        .def_readwrite("year", &ScoreTable::year)
        .def_property(
            "entries",
            [](const ScoreTable& s) {
                std::map<std::string, std::map<std::string, double>> out(s.entries.begin(), s.entries.end());
                return out;
            },
            [](ScoreTable& s, const std::map<std::string, std::map<std::string, double>>& e) {
                s.entries = {e.begin(), e.end()};
            })
        .def("score", &ScoreTable::score, "country"_a, "node"_a);

    py::class_<RankTable>(m, "RankTable")
        .def(py::init([](int year, std::string node, const std::map<std::string, int>& ranks) {
                 RankTable t;
                 t.year = year;
                 t.node = std::move(node);
                 t.ranks = {ranks.begin(), ranks.end()};
                 return t;
             }),
             "year"_a, "node"_a, "ranks"_a)
        .def_readonly("year", &RankTable::year)
        .def_readonly("node", &RankTable::node)
        .def_property_readonly("ranks", [](const RankTable& t) {
            return std::map<std::string, int>(t.ranks.begin(), t.ranks.end());
        })
        .def("ordered", &RankTable::ordered);

    m.def("normalize_minmax", [](double x, double lo, double hi) { return normalize_minmax(x, {lo, hi}); },
          "x"_a, "min"_a, "max"_a);
    m.def("compute_all", &compute_all, "tree"_a, "panel"_a, "year"_a, "policy"_a = MissingPolicy::Strict);
    m.def("evaluate_node",
          [](const IndexTree& tree, const std::string& node, InnovatorClass cls,
             const std::map<std::string, double>& leaves, MissingPolicy policy) {
              LeafAssignment assignment;
              for (const auto& [leaf, v] : leaves) assignment.emplace(std::make_pair(std::string("_"), leaf), v);
              return evaluate_node(tree, node, cls, assignment, "_", policy);
          },
          "tree"_a, "node"_a, "cls"_a, "leaves"_a, "policy"_a = MissingPolicy::Strict,
          "Evaluate one node for a single anonymous country from a {leaf: value} dict");

    m.def("rank_scores", &rank_scores, "scores"_a, "node"_a = std::string(wef::kGci));
    m.def("rank_delta", [](const RankTable& prev, const RankTable& cur) {
        auto d = rank_delta(prev, cur);
        return py::dict("delta"_a = d.delta, "entrants"_a = d.entrants, "leavers"_a = d.leavers);
    }, "prev"_a, "cur"_a);

    py::class_<ChiSquareResult>(m, "ChiSquareResult")
        .def_readonly("statistic", &ChiSquareResult::statistic)
        .def_readonly("df", &ChiSquareResult::df)
        .def_readonly("p_value", &ChiSquareResult::p_value)
        .def_readonly("critical_value", &ChiSquareResult::critical_value)
        .def_readonly("alpha", &ChiSquareResult::alpha)
        .def_readonly("decision", &ChiSquareResult::decision);
    py::class_<TrendResult>(m, "TrendResult")
        .def_readonly("slope", &TrendResult::slope)
        .def_readonly("intercept", &TrendResult::intercept)
        .def_readonly("n", &TrendResult::n);
    py::class_<CorrelationResult>(m, "CorrelationResult")
        .def_readonly("r", &CorrelationResult::r)
        .def_readonly("n", &CorrelationResult::n);

    m.def("chi_square_statistic", [](const std::vector<double>& o, const std::vector<double>& e) {
        return chi_square_statistic(o, e);
    }, "observed"_a, "expected"_a);
    m.def("chi_square_sf", &chi_square_sf, "x"_a, "df"_a);
    m.def("chi_square_isf", &chi_square_isf, "alpha"_a, "df"_a);
    m.def("chi_square_decision", &chi_square_decision, "statistic"_a, "df"_a, "alpha"_a = 0.05);
    m.def("rank_homogeneity_test", &rank_homogeneity_test, "prev"_a, "cur"_a, "alpha"_a = 0.05);
    m.def("ols_fit", [](const std::vector<std::pair<double, double>>& series) { return ols_fit(series); }, "series"_a);
    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
          "x"_a, "y"_a);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init([](std::string country, std::string node, double value) {
                 return Scenario{std::move(country), std::move(node), value};
             }),
             "country"_a, "node"_a, "override"_a)
        .def_readonly("country", &Scenario::country)
        .def_readonly("node", &Scenario::node)
        .def_readonly("override", &Scenario::override_score);
    py::class_<WhatIfOutcome>(m, "WhatIfOutcome")
        .def_readonly("baseline_rank", &WhatIfOutcome::baseline_rank)
        .def_readonly("new_rank", &WhatIfOutcome::new_rank)
        .def_readonly("baseline_gci", &WhatIfOutcome::baseline_gci)
        .def_readonly("new_gci", &WhatIfOutcome::new_gci)
        .def_readonly("delta_rank", &WhatIfOutcome::delta_rank);
    py::class_<RankGainSolution>(m, "RankGainSolution")
        .def_readonly("delta", &RankGainSolution::delta)
        .def_property_readonly("path_weight", [](const RankGainSolution& s) { return s.path_weight.to_string(); })
        .def_readonly("target_gci", &RankGainSolution::target_gci)
        .def_readonly("current_node_score", &RankGainSolution::current_node_score)
        .def_property_readonly("feasible", &RankGainSolution::feasible);

    auto class_map = [](const std::map<std::string, InnovatorClass>& c) { return ClassMap(c.begin(), c.end()); };
    m.def("apply_scenario",
          [class_map](const IndexTree& tree, const ScoreTable& scores,
                      const std::map<std::string, InnovatorClass>& classes,
                      const Scenario& scenario) { return apply_scenario(tree, scores, class_map(classes), scenario); },
          "tree"_a, "scores"_a, "classes"_a, "scenario"_a);
    m.def("min_delta_for_rank_gain",
          [class_map](const IndexTree& tree, const ScoreTable& scores,
                      const std::map<std::string, InnovatorClass>& classes, const std::string& country, int k,
                      const std::string& node) {
              return min_delta_for_rank_gain(tree, scores, class_map(classes), country, k, node);
          },
          "tree"_a, "scores"_a, "classes"_a, "country"_a, "k"_a, "node"_a = std::string(wef::kTechnology));

    m.def("scores_csv", [](const ScoreTable& s) { return render(scores_report(s), Format::Csv); }, "scores"_a);
}
