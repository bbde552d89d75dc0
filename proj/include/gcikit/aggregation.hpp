#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "gcikit/index_model.hpp"

namespace gcikit {

enum class MissingPolicy {
    Strict,       // a missing leaf is an error
    Renormalize,  // drop missing children and rescale the remaining weights
};

std::string_view to_string(MissingPolicy p);
std::optional<MissingPolicy> parse_missing_policy(std::string_view text);

inline constexpr double kScaleMin = 1.0;
inline constexpr double kScaleMax = 7.0;

/// 1 + 6 * (clamp(x) - min) / (max - min). Throws DegenerateRangeError.
double normalize_minmax(double x, const Normalization& norm);

/// Raw leaf values keyed by (country, leaf id).
using LeafAssignment = std::map<std::pair<std::string, std::string>, double>;

/// Resolved min-max bounds per scaled leaf.
using LeafBounds = std::map<std::string, Normalization, std::less<>>;

/// Bounds for every scaled leaf reachable in `tree`, resolved for `year`
/// according to each leaf's ScaleMode.
LeafBounds resolve_bounds(const IndexTree& tree, const Panel& panel, int year);

/// Bottom-up evaluator over a validated tree.
class Evaluator {
public:
    Evaluator(const IndexTree& tree, LeafBounds bounds = {}, MissingPolicy policy = MissingPolicy::Strict);

    /// Score of `node` for one country. Throws MissingLeafError (strict, or
    /// when nothing below the node is present), OutOfScaleError for unscaled
    /// leaves outside [1, 7], DegenerateRangeError for scaled leaves whose
    /// bounds could not be resolved.
    double evaluate(std::string_view node, InnovatorClass cls, const LeafAssignment& leaves,
                    std::string_view country) const;

    /// Scores of every node reachable for `cls` that could be evaluated.
    std::map<std::string, double> evaluate_all(InnovatorClass cls, const LeafAssignment& leaves,
                                               std::string_view country) const;

    const IndexTree& tree() const { return tree_; }
    MissingPolicy policy() const { return policy_; }

private:
    std::optional<double> leaf_score(const Node& leaf, const LeafAssignment& leaves, std::string_view country) const;

    IndexTree tree_;
    LeafBounds bounds_;
    MissingPolicy policy_;
};

/// Convenience wrapper: evaluate one node with default (empty) bounds.
double evaluate_node(const IndexTree& tree, std::string_view node, InnovatorClass cls, const LeafAssignment& leaves,
                     std::string_view country, MissingPolicy policy = MissingPolicy::Strict);

/// Leaf values of `panel` for `year`, restricted to the given leaves.
LeafAssignment leaf_assignment(const Panel& panel, int year, const std::vector<std::string>& leaf_ids);

/// Scores for every root-reachable node for every country observed in `year`.
/// Throws YearNotFoundError, or MissingLeafError listing all absent
/// (country, leaf) pairs under the strict policy.
ScoreTable compute_all(const IndexTree& tree, const Panel& panel, int year,
                       MissingPolicy policy = MissingPolicy::Strict);

}  // namespace gcikit
