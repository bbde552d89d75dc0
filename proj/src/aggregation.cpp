#include "gcikit/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "gcikit/errors.hpp"

namespace gcikit {

std::string_view to_string(MissingPolicy p) {
    return p == MissingPolicy::Strict ? "strict" : "renormalize";
}

std::optional<MissingPolicy> parse_missing_policy(std::string_view text) {
    if (text == "strict") return MissingPolicy::Strict;
    if (text == "renormalize") return MissingPolicy::Renormalize;
    return std::nullopt;
}

double normalize_minmax(double x, const Normalization& norm) {
    if (!(norm.max > norm.min)) {
        throw DegenerateRangeError("normalization range [" + std::to_string(norm.min) + ", " +
                                   std::to_string(norm.max) + "] is empty");
    }
    const double clamped = std::clamp(x, norm.min, norm.max);
    const double s = kScaleMin + (kScaleMax - kScaleMin) * (clamped - norm.min) / (norm.max - norm.min);
    return std::clamp(s, kScaleMin, kScaleMax);
}

LeafBounds resolve_bounds(const IndexTree& tree, const Panel& panel, int year) {
    std::set<std::string> leaves;
    for (InnovatorClass c : kAllClasses) {
        for (auto& id : tree.reachable_leaves(c)) leaves.insert(std::move(id));
    }
    LeafBounds out;
    for (const auto& id : leaves) {
        const LeafScale& scale = tree.node(id).scale;
        switch (scale.mode) {
            case ScaleMode::None:
                break;
            case ScaleMode::Fixed: {
                if (auto it = scale.bounds_by_year.find(year); it != scale.bounds_by_year.end()) {
                    out.emplace(id, it->second);
                } else if (scale.bounds) {
                    out.emplace(id, *scale.bounds);
                } else {
                    throw SchemaError("leaf '" + id + "' has fixed normalization but no bounds for " +
                                      std::to_string(year));
                }
                break;
            }
            case ScaleMode::ObservedYear:
            case ScaleMode::ObservedPooled: {
                double lo = std::numeric_limits<double>::infinity();
                double hi = -lo;
                for (const auto& o : panel.observations()) {
                    if (o.indicator != id) continue;
                    if (scale.mode == ScaleMode::ObservedYear && o.year != year) continue;
                    lo = std::min(lo, o.value);
                    hi = std::max(hi, o.value);
                }
                if (lo > hi) break;  // no data: reported as a missing leaf later
                if (!(hi > lo)) {
                    throw DegenerateRangeError("observed values of '" + id + "' span no range in " +
                                               std::to_string(year) + "; cannot min-max normalize");
                }
                out.emplace(id, Normalization{lo, hi});
                break;
            }
        }
    }
    return out;
}

Evaluator::Evaluator(const IndexTree& tree, LeafBounds bounds, MissingPolicy policy)
    : tree_(tree), bounds_(std::move(bounds)), policy_(policy) {}

std::optional<double> Evaluator::leaf_score(const Node& leaf, const LeafAssignment& leaves,
                                            std::string_view country) const {
    auto it = leaves.find(std::make_pair(std::string(country), leaf.id));
    if (it == leaves.end()) return std::nullopt;
    const double raw = it->second;
    if (!std::isfinite(raw)) {
        throw OutOfScaleError("leaf '" + leaf.id + "' for '" + std::string(country) + "' is not finite");
    }
    if (leaf.scale.mode == ScaleMode::None) {
        if (raw < kScaleMin || raw > kScaleMax) {
            throw OutOfScaleError("leaf '" + leaf.id + "' for '" + std::string(country) + "' is " +
                                  std::to_string(raw) + ", outside the 1-7 scale");
        }
        return raw;
    }
    if (auto b = bounds_.find(leaf.id); b != bounds_.end()) return normalize_minmax(raw, b->second);
    if (leaf.scale.bounds) return normalize_minmax(raw, *leaf.scale.bounds);
    throw DegenerateRangeError("no normalization bounds resolved for leaf '" + leaf.id + "'");
}

std::map<std::string, double> Evaluator::evaluate_all(InnovatorClass cls, const LeafAssignment& leaves,
                                                      std::string_view country) const {
    std::map<std::string, double> scores;
    std::vector<std::string> missing;
    for (const auto& id : tree_.topological_order(cls)) {
        const Node& n = tree_.node(id);
        if (n.is_leaf()) {
            if (auto s = leaf_score(n, leaves, country)) {
                scores.emplace(id, *s);
            } else {
                missing.push_back(id);
            }
            continue;
        }
        double total = 0.0;
        Rational present(0);
        bool all_present = true;
        for (const auto& child : n.children_for(cls)) {
            auto s = scores.find(child.id);
            if (s == scores.end()) {
                all_present = false;
                continue;
            }
            total += child.weight.to_double() * s->second;
            present += child.weight;
        }
        if (all_present) {
            scores.emplace(id, total);
        } else if (policy_ == MissingPolicy::Renormalize && present.is_positive()) {
            scores.emplace(id, total / present.to_double());
        }
    }
    if (policy_ == MissingPolicy::Strict && !missing.empty()) {
        std::string msg = "missing leaves for '" + std::string(country) + "':";
        for (const auto& m : missing) msg += " " + m;
        throw MissingLeafError(msg);
    }
    return scores;
}

double Evaluator::evaluate(std::string_view node, InnovatorClass cls, const LeafAssignment& leaves,
                           std::string_view country) const {
    const Node& target = tree_.node(node);
    // Evaluate only the subtree below `node`.
    IndexTree sub(tree_.nodes(), target.id);
    Evaluator local(sub, bounds_, policy_);
    auto scores = local.evaluate_all(cls, leaves, country);
    auto it = scores.find(target.id);
    if (it == scores.end()) {
        throw MissingLeafError("no data below '" + target.id + "' for '" + std::string(country) + "'");
    }
    return it->second;
}

double evaluate_node(const IndexTree& tree, std::string_view node, InnovatorClass cls, const LeafAssignment& leaves,
                     std::string_view country, MissingPolicy policy) {
    return Evaluator(tree, {}, policy).evaluate(node, cls, leaves, country);
}

LeafAssignment leaf_assignment(const Panel& panel, int year, const std::vector<std::string>& leaf_ids) {
    std::set<std::string_view> wanted(leaf_ids.begin(), leaf_ids.end());
    LeafAssignment out;
    for (const auto& o : panel.observations()) {
        if (o.year == year && wanted.contains(o.indicator)) out.emplace(std::make_pair(o.country, o.indicator), o.value);
    }
    return out;
}

ScoreTable compute_all(const IndexTree& tree, const Panel& panel, int year, MissingPolicy policy) {
    if (!panel.has_year(year)) {
        throw YearNotFoundError("year not found: " + std::to_string(year));
    }
    std::set<std::string> all_leaves;
    for (InnovatorClass c : kAllClasses) {
        for (auto& id : tree.reachable_leaves(c)) all_leaves.insert(std::move(id));
    }
    const LeafAssignment leaves = leaf_assignment(panel, year, {all_leaves.begin(), all_leaves.end()});
    const Evaluator evaluator(tree, resolve_bounds(tree, panel, year), policy);

    ScoreTable table;
    table.year = year;
    std::vector<std::string> missing;
    for (const auto& country : panel.countries(year)) {
        const InnovatorClass cls = panel.class_of(country);
        if (policy == MissingPolicy::Strict) {
            for (const auto& leaf : tree.reachable_leaves(cls)) {
                if (!leaves.contains(std::make_pair(country, leaf))) missing.push_back("(" + country + ", " + leaf + ")");
            }
            if (!missing.empty()) continue;
        }
        auto scores = evaluator.evaluate_all(cls, leaves, country);
        if (!scores.contains(tree.root())) {
            throw MissingLeafError("no data below '" + tree.root() + "' for '" + country + "' in " +
                                   std::to_string(year));
        }
        table.entries.emplace(country, std::map<std::string, double>(scores.begin(), scores.end()));
    }
    if (!missing.empty()) {
        std::string msg = "missing leaves in " + std::to_string(year) + ":";
        for (const auto& m : missing) msg += " " + m;
        throw MissingLeafError(msg);
    }
    return table;
}

}  // namespace gcikit
