#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>

#include "gcikit/aggregation.hpp"
#include "gcikit/index_model.hpp"

namespace gcikit {

inline constexpr std::string_view kDefaultTreeName = "wef-default";

// Panel CSV:   header "year,country,indicator,value", '#' starts a comment line.
// Classes CSV: header "country,class", class is core or noncore (any case).
// Errors carry "<source>:<line>:<column>" locations.

std::vector<Observation> parse_panel_csv(std::istream& in, std::string_view source = "<input>");
ClassMap parse_classes_csv(std::istream& in, std::string_view source = "<input>");

/// Throws IoError, ParseError, DuplicateKeyError or MissingClassError.
Panel load_panel(const std::filesystem::path& path, const ClassMap& classes);
ClassMap load_classes(const std::filesystem::path& path);

/// Tree config JSON:
///   {"base": "wef-default"?, "root": "GCI",
///    "nodes": [{"id": "...", "children": [{"id": "...", "weight": "p/q"}],
///               "weights_by_class": {"core": [...], "noncore": [...]},
///               "normalization": "observed" | "observed-pooled" | {"min": a, "max": b}
///                                | {"by_year": {"2005": {"min": a, "max": b}}}}]}
/// Nodes listed next to a base replace the base node with the same id.
/// Returns a validated tree; throws SchemaError or a validation error.
IndexTree parse_tree_json(std::string_view text);
/// `spec` is either a file path or the literal "wef-default".
IndexTree load_tree(std::string_view spec);
/// Deterministic serialization accepted by parse_tree_json.
std::string tree_to_json(const IndexTree& tree);

struct DatasetManifest {
    std::filesystem::path panel;
    std::filesystem::path classes;
    std::string tree = std::string(kDefaultTreeName);
    MissingPolicy policy = MissingPolicy::Strict;
};

struct Dataset {
    Panel panel;
    IndexTree tree;
    MissingPolicy policy = MissingPolicy::Strict;
};

Dataset load_dataset(const DatasetManifest& manifest);

/// Reads a score report (columns year,country,node,score) for one year.
ScoreTable load_scores_csv(const std::filesystem::path& path, std::optional<int> year = std::nullopt);
/// Reads ranks (columns year,country,rank; optional node) for one year.
RankTable load_ranks_csv(const std::filesystem::path& path, int year);

std::string read_file(const std::filesystem::path& path);

}  // namespace gcikit
