#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gcikit/rational.hpp"

namespace gcikit {

enum class InnovatorClass { Core, NonCore };

inline constexpr InnovatorClass kAllClasses[] = {InnovatorClass::Core, InnovatorClass::NonCore};

std::string_view to_string(InnovatorClass c);
/// Case-insensitive "core" / "noncore".
std::optional<InnovatorClass> parse_innovator_class(std::string_view text);

using ClassMap = std::map<std::string, InnovatorClass>;

struct Observation {
    int year = 0;
    std::string country;
    std::string indicator;
    double value = 0.0;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Throws InvalidObservationError when the year or identifiers are malformed.
void check_observation(const Observation& obs);

/// Immutable set of observations keyed by (year, country, indicator).
class Panel {
public:
    Panel() = default;
    /// Throws DuplicateKeyError, MissingClassError or InvalidObservationError.
    Panel(std::vector<Observation> observations, ClassMap classes);

    const std::vector<Observation>& observations() const { return observations_; }
    const ClassMap& classes() const { return classes_; }

    std::set<int> years() const;
    bool has_year(int year) const;
    /// Countries with at least one observation in the given year.
    std::vector<std::string> countries(int year) const;
    std::optional<double> value(int year, std::string_view country, std::string_view indicator) const;
    InnovatorClass class_of(std::string_view country) const;

private:
    std::vector<Observation> observations_;
    ClassMap classes_;
    std::map<std::tuple<int, std::string, std::string>, std::size_t, std::less<>> index_;
};

struct Normalization {
    double min = 0.0;
    double max = 1.0;

    /// Throws DegenerateRangeError unless max > min.
    static Normalization checked(double min, double max);
    friend bool operator==(const Normalization&, const Normalization&) = default;
};

/// How a leaf's raw value is brought onto the 1-7 scale.
enum class ScaleMode {
    None,            // value already on 1-7 (survey data)
    ObservedYear,    // min-max over the countries observed in the evaluated year
    ObservedPooled,  // min-max over every year in the panel
    Fixed,           // min-max with configured bounds, optionally per year
};

struct LeafScale {
    ScaleMode mode = ScaleMode::None;
    std::optional<Normalization> bounds;
    std::map<int, Normalization> bounds_by_year;

    friend bool operator==(const LeafScale&, const LeafScale&) = default;
};

struct WeightedChild {
    std::string id;
    Rational weight;

    friend bool operator==(const WeightedChild&, const WeightedChild&) = default;
};

struct Node {
    std::string id;
    /// Children shared by both classes; empty for leaves.
    std::vector<WeightedChild> children;
    /// Class-specific child lists take precedence over `children`.
    std::map<InnovatorClass, std::vector<WeightedChild>> children_by_class;
    LeafScale scale;

    bool is_leaf() const { return children.empty() && children_by_class.empty(); }
    const std::vector<WeightedChild>& children_for(InnovatorClass c) const;

    friend bool operator==(const Node&, const Node&) = default;
};

/// Weighted aggregation DAG. Build one with nodes and a root, then pass it
/// through validate_tree() before evaluating.
class IndexTree {
public:
    IndexTree() = default;
    IndexTree(std::map<std::string, Node, std::less<>> nodes, std::string root);

    const std::string& root() const { return root_; }
    const std::map<std::string, Node, std::less<>>& nodes() const { return nodes_; }
    bool contains(std::string_view id) const { return nodes_.find(id) != nodes_.end(); }
    /// Throws UnknownNodeError.
    const Node& node(std::string_view id) const;

    /// Nodes reachable from the root for a class, children before parents.
    std::vector<std::string> topological_order(InnovatorClass c) const;
    std::vector<std::string> reachable_leaves(InnovatorClass c) const;
    /// Ids reachable from the root under either class, sorted.
    std::vector<std::string> reachable_ids() const;
    /// Parents of `id` among root-reachable nodes for class `c`.
    std::vector<std::string> parents(std::string_view id, InnovatorClass c) const;

    /// Linear coefficient of `descendant` in `ancestor` for class `c`: the sum
    /// over all paths of the product of edge weights. Zero when no path exists.
    Rational path_weight(std::string_view descendant, std::string_view ancestor, InnovatorClass c) const;

    /// Copy of the tree in which the listed nodes become leaves carrying
    /// already-scaled values. Nodes no longer reachable are dropped.
    IndexTree truncated_at(const std::set<std::string>& new_leaves) const;

    friend bool operator==(const IndexTree&, const IndexTree&) = default;

private:
    std::map<std::string, Node, std::less<>> nodes_;
    std::string root_;
};

/// Returns the tree unchanged when acyclic, fully linked and every aggregate
/// has weights summing to exactly 1 per class. Throws CycleError,
/// WeightSumError or DanglingChildError.
IndexTree validate_tree(IndexTree tree);

namespace wef {
inline constexpr std::string_view kGci = "GCI";
inline constexpr std::string_view kTechnology = "TI";
inline constexpr std::string_view kPublicInstitutions = "PII";
inline constexpr std::string_view kMacroEnvironment = "MEI";
inline constexpr std::string_view kIct = "ICTS";
inline constexpr std::string_view kIctSurvey = "ICTsd";
inline constexpr std::string_view kIctHard = "ICThd";

/// The five executive-survey questions feeding ICTsd.
extern const std::vector<std::string> kIctSurveyLeaves;
/// The five hard ICT indicators feeding ICThd.
extern const std::vector<std::string> kIctHardLeaves;
}  // namespace wef

/// The Growth Competitiveness Index tree with core/non-core weightings.
IndexTree default_wef_tree();

/// One year of node scores on the 1-7 scale.
struct ScoreTable {
    int year = 0;
    /// country -> node -> score
    std::map<std::string, std::map<std::string, double>, std::less<>> entries;

    std::optional<double> score(std::string_view country, std::string_view node) const;
    friend bool operator==(const ScoreTable&, const ScoreTable&) = default;
};

enum class TiePolicy { Competition };

struct RankTable {
    int year = 0;
    std::string node;
    std::map<std::string, int, std::less<>> ranks;
    TiePolicy policy = TiePolicy::Competition;

    /// (country, rank) pairs by ascending rank, ties by ascending country code.
    std::vector<std::pair<std::string, int>> ordered() const;
    friend bool operator==(const RankTable&, const RankTable&) = default;
};

}  // namespace gcikit
