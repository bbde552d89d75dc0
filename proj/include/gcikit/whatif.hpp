#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "gcikit/index_model.hpp"

namespace gcikit {

/// Margin added on the score scale so a solved override strictly overtakes.
inline constexpr double kExceedanceMargin = 1e-9;

/// Override one node score for one country; every other country is frozen.
struct Scenario {
    std::string country;
    std::string node;
    double override_score = 0.0;
};

struct WhatIfOutcome {
    int baseline_rank = 0;
    int new_rank = 0;
    double baseline_gci = 0.0;
    double new_gci = 0.0;
    /// baseline_rank - new_rank; positive is a climb.
    int delta_rank = 0;
};

/// Re-derives the overridden node's ancestors for the scenario country and
/// reranks everyone on the tree root. Throws UnknownCountryError,
/// OverrideOutOfScaleError or UnknownNodeError.
WhatIfOutcome apply_scenario(const IndexTree& tree, const ScoreTable& scores, const ClassMap& classes,
                             const Scenario& scenario);

/// Ancestor scores of one country after overriding `node`; returned map holds
/// every node score for the country, with the override applied.
std::map<std::string, double> rescore_country(const IndexTree& tree, const std::map<std::string, double>& scores,
                                              InnovatorClass cls, std::string_view node, double value);

struct RankGainSolution {
    /// Smallest increase of the node score that achieves the gain; empty when
    /// even a score of 7 does not.
    std::optional<double> delta;
    /// Linear coefficient of the node in the root score for the country's class.
    Rational path_weight;
    /// Root score the country has to strictly exceed.
    double target_gci = 0.0;
    double current_node_score = 0.0;

    bool feasible() const { return delta.has_value(); }
};

/// Minimal increase of `node` that lifts `country` at least `k` rank
/// positions on the root score. Throws NotAnAncestorPathError when the node
/// carries no weight in the root for the country's class.
RankGainSolution min_delta_for_rank_gain(const IndexTree& tree, const ScoreTable& scores, const ClassMap& classes,
                                         std::string_view country, int k, std::string_view node);

}  // namespace gcikit
