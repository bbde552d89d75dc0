#include "gcikit/whatif.hpp"

#include <algorithm>
#include <set>

#include "gcikit/aggregation.hpp"
#include "gcikit/errors.hpp"
#include "gcikit/ranking.hpp"

namespace gcikit {

namespace {

const std::map<std::string, double>& country_scores(const ScoreTable& scores, std::string_view country) {
    auto it = scores.entries.find(country);
    if (it == scores.entries.end()) {
        throw UnknownCountryError("country '" + std::string(country) + "' is not in the " +
                                  std::to_string(scores.year) + " score table");
    }
    return it->second;
}

InnovatorClass class_for(const ClassMap& classes, std::string_view country) {
    auto it = classes.find(std::string(country));
    if (it == classes.end()) throw MissingClassError("country '" + std::string(country) + "' has no innovator class");
    return it->second;
}

// Coefficient of `node` in the root score, using only the children that are
// actually scored for this country (matches renormalized evaluation).
Rational effective_weight(const IndexTree& tree, const std::map<std::string, double>& scores, InnovatorClass cls,
                          std::string_view node) {
    auto order = tree.topological_order(cls);
    std::map<std::string, Rational> coef;
    coef[tree.root()] = Rational(1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Node& n = tree.node(*it);
        if (n.is_leaf() || !coef.contains(*it)) continue;
        Rational present(0);
        for (const auto& child : n.children_for(cls)) {
            if (scores.contains(child.id)) present += child.weight;
        }
        if (!present.is_positive()) continue;
        for (const auto& child : n.children_for(cls)) {
            if (scores.contains(child.id)) coef[child.id] += coef[*it] * child.weight / present;
        }
    }
    auto found = coef.find(std::string(node));
    return found == coef.end() ? Rational(0) : found->second;
}

}  // namespace

std::map<std::string, double> rescore_country(const IndexTree& tree, const std::map<std::string, double>& scores,
                                              InnovatorClass cls, std::string_view node, double value) {
    std::map<std::string, double> out = scores;
    const std::string target(node);
    if (!out.contains(target)) throw UnknownNodeError("node '" + target + "' has no score to override");
    out[target] = value;
    std::set<std::string> affected{target};
    for (const auto& id : tree.topological_order(cls)) {
        if (affected.contains(id)) continue;
        const Node& n = tree.node(id);
        if (n.is_leaf() || !out.contains(id)) continue;
        const auto& children = n.children_for(cls);
        if (std::none_of(children.begin(), children.end(), [&](const auto& c) { return affected.contains(c.id); })) {
            continue;
        }
        // Same summation order as Evaluator::evaluate_all.
        double total = 0.0;
        Rational present(0);
        bool all_present = true;
        for (const auto& child : children) {
            auto s = out.find(child.id);
            if (s == out.end()) {
                all_present = false;
                continue;
            }
            total += child.weight.to_double() * s->second;
            present += child.weight;
        }
        out[id] = all_present ? total : total / present.to_double();
        affected.insert(id);
    }
    return out;
}

WhatIfOutcome apply_scenario(const IndexTree& tree, const ScoreTable& scores, const ClassMap& classes,
                             const Scenario& scenario) {
    const auto& baseline = country_scores(scores, scenario.country);
    if (!(scenario.override_score >= kScaleMin && scenario.override_score <= kScaleMax)) {
        throw OverrideOutOfScaleError("override " + std::to_string(scenario.override_score) + " for '" +
                                      scenario.node + "' is outside the 1-7 scale");
    }
    tree.node(scenario.node);
    const InnovatorClass cls = class_for(classes, scenario.country);
    const std::string& root = tree.root();

    ScoreTable mutated = scores;
    mutated.entries[scenario.country] = rescore_country(tree, baseline, cls, scenario.node, scenario.override_score);

    WhatIfOutcome out;
    out.baseline_gci = baseline.at(root);
    out.new_gci = mutated.entries.at(scenario.country).at(root);
    out.baseline_rank = rank_scores(scores, root).ranks.at(scenario.country);
    out.new_rank = rank_scores(mutated, root).ranks.at(scenario.country);
    out.delta_rank = out.baseline_rank - out.new_rank;
    return out;
}

RankGainSolution min_delta_for_rank_gain(const IndexTree& tree, const ScoreTable& scores, const ClassMap& classes,
                                         std::string_view country, int k, std::string_view node) {
    if (k < 1) throw DomainError("rank gain must be at least 1, got " + std::to_string(k));
    const auto& own_scores = country_scores(scores, country);
    const InnovatorClass cls = class_for(classes, country);
    const std::string& root = tree.root();
    tree.node(node);

    RankGainSolution out;
    out.path_weight = effective_weight(tree, own_scores, cls, node);
    if (!out.path_weight.is_positive()) {
        throw NotAnAncestorPathError("node '" + std::string(node) + "' carries no weight in '" + root + "' for '" +
                                     std::string(country) + "'");
    }
    out.current_node_score = own_scores.at(std::string(node));
    const double own = own_scores.at(root);

    std::vector<double> above;
    for (const auto& [other, by_node] : scores.entries) {
        if (other == country) continue;
        const double s = by_node.at(root);
        if (s > own) above.push_back(s);
    }
    std::sort(above.begin(), above.end(), std::greater<>());
    const int m = static_cast<int>(above.size());
    if (k > m) {
        out.target_gci = m > 0 ? above.front() : own;
        return out;
    }
    // Passing the k-th nearest score above moves the competition rank up by k.
    out.target_gci = above[m - k];

    const auto at_max = rescore_country(tree, own_scores, cls, node, kScaleMax).at(root);
    if (!(at_max > out.target_gci)) return out;

    const double required = (out.target_gci - own) / out.path_weight.to_double();
    out.delta = std::min(required + kExceedanceMargin, kScaleMax - out.current_node_score);
    return out;
}

}  // namespace gcikit
