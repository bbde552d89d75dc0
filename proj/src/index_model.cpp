#include "gcikit/index_model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <tuple>

#include "gcikit/errors.hpp"

namespace gcikit {

std::string_view to_string(InnovatorClass c) {
    return c == InnovatorClass::Core ? "core" : "noncore";
}

std::optional<InnovatorClass> parse_innovator_class(std::string_view text) {
    std::string lower;
    for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    if (lower == "core") return InnovatorClass::Core;
    if (lower == "noncore" || lower == "non-core") return InnovatorClass::NonCore;
    return std::nullopt;
}

namespace {

bool valid_identifier(std::string_view s) {
    return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) != 0;
    });
}

}  // namespace

void check_observation(const Observation& obs) {
    if (obs.year < 1990 || obs.year > 2100) {
        throw InvalidObservationError("year " + std::to_string(obs.year) + " outside [1990, 2100]");
    }
    if (!valid_identifier(obs.country)) {
        throw InvalidObservationError("country code '" + obs.country + "' is empty or contains whitespace");
    }
    if (!valid_identifier(obs.indicator)) {
        throw InvalidObservationError("indicator '" + obs.indicator + "' is empty or contains whitespace");
    }
}

Panel::Panel(std::vector<Observation> observations, ClassMap classes)
    : observations_(std::move(observations)), classes_(std::move(classes)) {
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const Observation& o = observations_[i];
        check_observation(o);
        auto [it, inserted] = index_.emplace(std::make_tuple(o.year, o.country, o.indicator), i);
        if (!inserted) {
            throw DuplicateKeyError("duplicate observation (" + std::to_string(o.year) + ", " + o.country + ", " +
                                    o.indicator + ")");
        }
        if (!classes_.contains(o.country)) {
            throw MissingClassError("country '" + o.country + "' has no innovator class");
        }
    }
}

std::set<int> Panel::years() const {
    std::set<int> out;
    for (const auto& o : observations_) out.insert(o.year);
    return out;
}

bool Panel::has_year(int year) const {
    auto it = index_.lower_bound(std::make_tuple(year, std::string(), std::string()));
    return it != index_.end() && std::get<0>(it->first) == year;
}

std::vector<std::string> Panel::countries(int year) const {
    std::set<std::string> out;
    for (const auto& o : observations_) {
        if (o.year == year) out.insert(o.country);
    }
    return {out.begin(), out.end()};
}

std::optional<double> Panel::value(int year, std::string_view country, std::string_view indicator) const {
    auto it = index_.find(std::make_tuple(year, country, indicator));
    if (it == index_.end()) return std::nullopt;
    return observations_[it->second].value;
}

InnovatorClass Panel::class_of(std::string_view country) const {
    auto it = classes_.find(std::string(country));
    if (it == classes_.end()) {
        throw MissingClassError("country '" + std::string(country) + "' has no innovator class");
    }
    return it->second;
}

Normalization Normalization::checked(double min, double max) {
    if (!(max > min)) {
        throw DegenerateRangeError("normalization range [" + std::to_string(min) + ", " + std::to_string(max) +
                                   "] is empty");
    }
    return {min, max};
}

const std::vector<WeightedChild>& Node::children_for(InnovatorClass c) const {
    if (auto it = children_by_class.find(c); it != children_by_class.end()) return it->second;
    return children;
}

IndexTree::IndexTree(std::map<std::string, Node, std::less<>> nodes, std::string root)
    : nodes_(std::move(nodes)), root_(std::move(root)) {}

const Node& IndexTree::node(std::string_view id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw UnknownNodeError("unknown node '" + std::string(id) + "'");
    return it->second;
}

std::vector<std::string> IndexTree::topological_order(InnovatorClass c) const {
    std::vector<std::string> order;
    std::set<std::string, std::less<>> done;
    std::set<std::string, std::less<>> on_stack;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        if (done.contains(id)) return;
        if (on_stack.contains(id)) throw CycleError("cycle through node '" + id + "'");
        on_stack.insert(id);
        auto it = nodes_.find(id);
        if (it == nodes_.end()) throw DanglingChildError("node '" + id + "' is referenced but not defined");
        for (const auto& child : it->second.children_for(c)) visit(child.id);
        on_stack.erase(id);
        done.insert(id);
        order.push_back(id);
    };
    visit(root_);
    return order;
}

std::vector<std::string> IndexTree::reachable_leaves(InnovatorClass c) const {
    std::vector<std::string> out;
    for (const auto& id : topological_order(c)) {
        if (node(id).is_leaf()) out.push_back(id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> IndexTree::reachable_ids() const {
    std::set<std::string> ids;
    for (InnovatorClass c : kAllClasses) {
        for (auto& id : topological_order(c)) ids.insert(std::move(id));
    }
    return {ids.begin(), ids.end()};
}

std::vector<std::string> IndexTree::parents(std::string_view id, InnovatorClass c) const {
    std::vector<std::string> out;
    for (const auto& candidate : topological_order(c)) {
        for (const auto& child : node(candidate).children_for(c)) {
            if (child.id == id) {
                out.push_back(candidate);
                break;
            }
        }
    }
    return out;
}

Rational IndexTree::path_weight(std::string_view descendant, std::string_view ancestor, InnovatorClass c) const {
    std::map<std::string, Rational, std::less<>> memo;
    std::function<Rational(const std::string&)> weight_from = [&](const std::string& id) -> Rational {
        if (id == descendant) return Rational(1);
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        Rational total(0);
        for (const auto& child : node(id).children_for(c)) total += child.weight * weight_from(child.id);
        memo.emplace(id, total);
        return total;
    };
    return weight_from(node(ancestor).id);
}

IndexTree IndexTree::truncated_at(const std::set<std::string>& new_leaves) const {
    std::map<std::string, Node, std::less<>> kept;
    std::function<void(const std::string&)> copy = [&](const std::string& id) {
        if (kept.contains(id)) return;
        Node n = node(id);
        if (new_leaves.contains(id)) {
            n.children.clear();
            n.children_by_class.clear();
            n.scale = LeafScale{};
            kept.emplace(id, std::move(n));
            return;
        }
        kept.emplace(id, n);
        for (const auto& child : n.children) copy(child.id);
        for (const auto& [cls, list] : n.children_by_class) {
            for (const auto& child : list) copy(child.id);
        }
    };
    copy(root_);
    return IndexTree(std::move(kept), root_);
}

IndexTree validate_tree(IndexTree tree) {
    if (!tree.contains(tree.root())) {
        throw DanglingChildError("root '" + tree.root() + "' is not defined");
    }
    for (const auto& [id, n] : tree.nodes()) {
        if (id != n.id) throw DanglingChildError("node keyed '" + id + "' has id '" + n.id + "'");
    }
    for (InnovatorClass c : kAllClasses) {
        // Throws on cycles and dangling references.
        for (const auto& id : tree.topological_order(c)) {
            const Node& n = tree.node(id);
            if (n.is_leaf()) {
                if (n.scale.bounds && !(n.scale.bounds->max > n.scale.bounds->min)) {
                    throw DegenerateRangeError("leaf '" + id + "' has an empty normalization range");
                }
                for (const auto& [year, b] : n.scale.bounds_by_year) {
                    if (!(b.max > b.min)) {
                        throw DegenerateRangeError("leaf '" + id + "' has an empty normalization range for " +
                                                   std::to_string(year));
                    }
                }
                continue;
            }
            const auto& children = n.children_for(c);
            if (children.empty()) {
                throw WeightSumError("node '" + id + "' has no children for class " + std::string(to_string(c)));
            }
            Rational sum(0);
            for (const auto& child : children) {
                if (!child.weight.is_positive() || child.weight > Rational(1)) {
                    throw WeightSumError("weight " + child.weight.to_string() + " of '" + child.id + "' under '" +
                                         id + "' is outside (0, 1]");
                }
                sum += child.weight;
            }
            if (sum != Rational(1)) {
                throw WeightSumError("weights under '" + id + "' sum to " + sum.to_string() + " for class " +
                                     std::string(to_string(c)));
            }
        }
    }
    // Unreachable nodes must still reference defined children.
    for (const auto& [id, n] : tree.nodes()) {
        for (InnovatorClass c : kAllClasses) {
            for (const auto& child : n.children_for(c)) {
                if (!tree.contains(child.id)) {
                    throw DanglingChildError("node '" + id + "' references undefined child '" + child.id + "'");
                }
            }
        }
    }
    return tree;
}

namespace wef {
const std::vector<std::string> kIctSurveyLeaves = {
    "internet_access_in_schools", "isp_competition", "gov_ict_prioritization", "gov_ict_promotion", "ict_laws",
};
const std::vector<std::string> kIctHardLeaves = {
    "cellular_telephones", "internet_users", "internet_hosts", "telephone_lines", "personal_computers",
};
}  // namespace wef

namespace {

std::vector<WeightedChild> weighted(std::initializer_list<std::pair<std::string_view, Rational>> list) {
    std::vector<WeightedChild> out;
    for (const auto& [id, w] : list) out.push_back({std::string(id), w});
    return out;
}

std::vector<WeightedChild> equal_weights(const std::vector<std::string>& ids) {
    std::vector<WeightedChild> out;
    for (const auto& id : ids) out.push_back({id, Rational(1, static_cast<std::int64_t>(ids.size()))});
    return out;
}

}  // namespace

IndexTree default_wef_tree() {
    std::map<std::string, Node, std::less<>> nodes;
    auto add = [&](Node n) { nodes.emplace(n.id, std::move(n)); };
    auto leaf = [&](std::string id, ScaleMode mode) {
        Node n;
        n.id = std::move(id);
        n.scale.mode = mode;
        add(std::move(n));
    };

    auto aggregate = [&](std::string_view id, std::vector<WeightedChild> shared,
                         std::vector<WeightedChild> core = {}, std::vector<WeightedChild> noncore = {}) {
        Node n;
        n.id = std::string(id);
        n.children = std::move(shared);
        if (!core.empty()) n.children_by_class[InnovatorClass::Core] = std::move(core);
        if (!noncore.empty()) n.children_by_class[InnovatorClass::NonCore] = std::move(noncore);
        add(std::move(n));
    };

    aggregate(wef::kGci, {}, weighted({{"TI", Rational(1, 2)}, {"PII", Rational(1, 4)}, {"MEI", Rational(1, 4)}}),
              weighted({{"TI", Rational(1, 3)}, {"PII", Rational(1, 3)}, {"MEI", Rational(1, 3)}}));
    aggregate(wef::kTechnology, {}, weighted({{"IS", Rational(1, 2)}, {"ICTS", Rational(1, 2)}}),
              weighted({{"IS", Rational(1, 8)}, {"TTS", Rational(3, 8)}, {"ICTS", Rational(1, 2)}}));
    aggregate(wef::kPublicInstitutions, weighted({{"CLS", Rational(1, 2)}, {"CS", Rational(1, 2)}}));
    aggregate(wef::kMacroEnvironment, weighted({{"MSS", Rational(1, 2)}, {"CCR", Rational(1, 4)}, {"GW", Rational(1, 4)}}));
    aggregate(wef::kIct, weighted({{"ICTsd", Rational(1, 3)}, {"ICThd", Rational(2, 3)}}));
    aggregate(wef::kIctSurvey, equal_weights(wef::kIctSurveyLeaves));
    aggregate(wef::kIctHard, equal_weights(wef::kIctHardLeaves));

    for (const char* id : {"IS", "TTS", "CLS", "CS", "MSS", "CCR", "GW"}) leaf(id, ScaleMode::None);
    for (const auto& id : wef::kIctSurveyLeaves) leaf(id, ScaleMode::None);
    for (const auto& id : wef::kIctHardLeaves) leaf(id, ScaleMode::ObservedYear);

    return validate_tree(IndexTree(std::move(nodes), std::string(wef::kGci)));
}

std::optional<double> ScoreTable::score(std::string_view country, std::string_view node) const {
    auto c = entries.find(country);
    if (c == entries.end()) return std::nullopt;
    auto n = c->second.find(std::string(node));
    if (n == c->second.end()) return std::nullopt;
    return n->second;
}

std::vector<std::pair<std::string, int>> RankTable::ordered() const {
    std::vector<std::pair<std::string, int>> out(ranks.begin(), ranks.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    return out;
}

}  // namespace gcikit
