#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gcikit/index_model.hpp"

namespace gcikit {

/// Descending-score standard competition ranking (1-2-2-4) of one node.
/// Throws MissingNodeError if any country lacks a score for `node`.
RankTable rank_scores(const ScoreTable& scores, std::string_view node);

/// Year-over-year movement between two rank tables.
///
/// Sign convention: delta = previous rank - current rank, so a country that
/// climbs from 66th to 57th gets +9 and a fall is negative.
struct RankDelta {
    std::map<std::string, int> delta;
    /// Ranked in the current table only.
    std::vector<std::string> entrants;
    /// Ranked in the previous table only.
    std::vector<std::string> leavers;

    friend bool operator==(const RankDelta&, const RankDelta&) = default;
};

/// Throws EmptyIntersectionError when the tables share no country.
RankDelta rank_delta(const RankTable& prev, const RankTable& cur);

}  // namespace gcikit
