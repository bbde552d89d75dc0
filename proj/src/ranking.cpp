#include "gcikit/ranking.hpp"

#include <algorithm>

#include "gcikit/errors.hpp"

namespace gcikit {

RankTable rank_scores(const ScoreTable& scores, std::string_view node) {
    std::vector<std::pair<std::string, double>> rows;
    for (const auto& [country, by_node] : scores.entries) {
        auto it = by_node.find(std::string(node));
        if (it == by_node.end()) {
            throw MissingNodeError("country '" + country + "' has no score for node '" + std::string(node) + "'");
        }
        rows.emplace_back(country, it->second);
    }
    // entries are keyed by country, so stable_sort leaves ties in ascending code order
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    RankTable table;
    table.year = scores.year;
    table.node = std::string(node);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        int rank = static_cast<int>(i) + 1;
        if (i > 0 && rows[i].second == rows[i - 1].second) rank = table.ranks.at(rows[i - 1].first);
        table.ranks.emplace(rows[i].first, rank);
    }
    return table;
}

RankDelta rank_delta(const RankTable& prev, const RankTable& cur) {
    RankDelta out;
    for (const auto& [country, rank] : prev.ranks) {
        if (auto it = cur.ranks.find(country); it != cur.ranks.end()) {
            out.delta.emplace(country, rank - it->second);
        } else {
            out.leavers.push_back(country);
        }
    }
    for (const auto& [country, rank] : cur.ranks) {
        if (!prev.ranks.contains(country)) out.entrants.push_back(country);
    }
    if (out.delta.empty()) {
        throw EmptyIntersectionError("rank tables for " + std::to_string(prev.year) + " and " +
                                     std::to_string(cur.year) + " share no country");
    }
    return out;
}

}  // namespace gcikit
