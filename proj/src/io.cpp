#include "gcikit/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "csv.hpp"
#include "gcikit/errors.hpp"

namespace gcikit {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

namespace {

void expect_header(const std::vector<csv::Row>& rows, std::string_view source,
                   const std::vector<std::string>& header) {
    if (rows.empty()) throw ParseError(std::string(source) + ": missing header");
    const csv::Row& first = rows.front();
    if (first.fields != header) {
        std::string want;
        for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
        throw ParseError(csv::location(source, first.line, 1) + ": expected header '" + want + "'");
    }
}

void expect_fields(const csv::Row& row, std::size_t n, std::string_view source) {
    if (row.fields.size() != n) {
        throw ParseError(csv::location(source, row.line, 1) + ": expected " + std::to_string(n) + " fields, found " +
                         std::to_string(row.fields.size()));
    }
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

std::vector<Observation> parse_panel_csv(std::istream& in, std::string_view source) {
    auto rows = csv::read(in, source);
    expect_header(rows, source, {"year", "country", "indicator", "value"});
    std::vector<Observation> out;
    std::map<std::tuple<int, std::string, std::string>, std::size_t> seen;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        expect_fields(row, 4, source);
        auto year = csv::to_integer(row.fields[0]);
        if (!year) throw ParseError(csv::location(source, row.line, row.columns[0]) + ": invalid year '" + row.fields[0] + "'");
        auto value = csv::to_double(row.fields[3]);
        if (!value || !std::isfinite(*value)) {
            throw ParseError(csv::location(source, row.line, row.columns[3]) + ": invalid value '" + row.fields[3] + "'");
        }
        Observation obs{static_cast<int>(*year), row.fields[1], row.fields[2], *value};
        try {
            check_observation(obs);
        } catch (const InvalidObservationError& e) {
            throw ParseError(csv::location(source, row.line, 1) + ": " + e.what());
        }
        auto [it, inserted] = seen.emplace(std::make_tuple(obs.year, obs.country, obs.indicator), row.line);
        if (!inserted) {
            throw DuplicateKeyError(csv::location(source, row.line, 1) + ": duplicate (" + row.fields[0] + ", " +
                                    obs.country + ", " + obs.indicator + "), first seen on line " +
                                    std::to_string(it->second));
        }
        out.push_back(std::move(obs));
    }
    return out;
}

ClassMap parse_classes_csv(std::istream& in, std::string_view source) {
    auto rows = csv::read(in, source);
    expect_header(rows, source, {"country", "class"});
    ClassMap out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        expect_fields(row, 2, source);
        auto cls = parse_innovator_class(row.fields[1]);
        if (!cls) {
            throw ParseError(csv::location(source, row.line, row.columns[1]) + ": unknown class '" + row.fields[1] +
                             "' (expected core or noncore)");
        }
        if (row.fields[0].empty() || row.fields[0].find_first_of(" \t") != std::string::npos) {
            throw ParseError(csv::location(source, row.line, 1) + ": invalid country code '" + row.fields[0] + "'");
        }
        if (!out.emplace(row.fields[0], *cls).second) {
            throw DuplicateKeyError(csv::location(source, row.line, 1) + ": duplicate country '" + row.fields[0] + "'");
        }
    }
    return out;
}

Panel load_panel(const std::filesystem::path& path, const ClassMap& classes) {
    auto in = open(path);
    auto observations = parse_panel_csv(in, path.string());
    for (const auto& o : observations) {
        if (!classes.contains(o.country)) {
            throw MissingClassError(path.string() + ": country '" + o.country + "' has no innovator class");
        }
    }
    return Panel(std::move(observations), classes);
}

ClassMap load_classes(const std::filesystem::path& path) {
    auto in = open(path);
    return parse_classes_csv(in, path.string());
}

namespace {

std::vector<WeightedChild> parse_children(const json& list, const std::string& owner) {
    if (!list.is_array()) throw SchemaError("children of '" + owner + "' must be an array");
    std::vector<WeightedChild> out;
    for (const auto& item : list) {
        if (!item.is_object() || !item.contains("id") || !item["id"].is_string() || !item.contains("weight")) {
            throw SchemaError("child of '" + owner + "' needs string 'id' and 'weight'");
        }
        const json& w = item["weight"];
        Rational weight;
        if (w.is_string()) {
            weight = Rational::parse(w.get<std::string>());
        } else if (w.is_number_integer()) {
            weight = Rational(w.get<std::int64_t>());
        } else {
            throw SchemaError("weight of '" + item["id"].get<std::string>() + "' under '" + owner +
                              "' must be a rational string such as \"1/3\"");
        }
        out.push_back({item["id"].get<std::string>(), weight});
    }
    return out;
}

Normalization parse_bounds(const json& j, const std::string& owner) {
    if (!j.is_object() || !j.contains("min") || !j.contains("max") || !j["min"].is_number() || !j["max"].is_number()) {
        throw SchemaError("normalization of '" + owner + "' needs numeric 'min' and 'max'");
    }
    return Normalization::checked(j["min"].get<double>(), j["max"].get<double>());
}

LeafScale parse_scale(const json& j, const std::string& owner) {
    LeafScale scale;
    if (j.is_string()) {
        const auto mode = j.get<std::string>();
        if (mode == "observed") {
            scale.mode = ScaleMode::ObservedYear;
        } else if (mode == "observed-pooled") {
            scale.mode = ScaleMode::ObservedPooled;
        } else if (mode == "none") {
            scale.mode = ScaleMode::None;
        } else {
            throw SchemaError("unknown normalization '" + mode + "' on '" + owner + "'");
        }
        return scale;
    }
    if (!j.is_object()) throw SchemaError("normalization of '" + owner + "' must be a string or object");
    scale.mode = ScaleMode::Fixed;
    if (j.contains("by_year")) {
        if (!j["by_year"].is_object()) throw SchemaError("'by_year' of '" + owner + "' must be an object");
        for (const auto& [key, bounds] : j["by_year"].items()) {
            auto year = csv::to_integer(key);
            if (!year) throw SchemaError("'by_year' key '" + key + "' of '" + owner + "' is not a year");
            scale.bounds_by_year.emplace(static_cast<int>(*year), parse_bounds(bounds, owner));
        }
        if (j.contains("min") || j.contains("max")) scale.bounds = parse_bounds(j, owner);
    } else {
        scale.bounds = parse_bounds(j, owner);
    }
    return scale;
}

Node parse_node(const json& j) {
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string()) {
        throw SchemaError("every node needs a string 'id'");
    }
    Node n;
    n.id = j["id"].get<std::string>();
    static const std::set<std::string> known = {"id", "children", "weights_by_class", "normalization"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw SchemaError("unknown key '" + key + "' on node '" + n.id + "'");
    }
    if (j.contains("children")) n.children = parse_children(j["children"], n.id);
    if (j.contains("weights_by_class")) {
        const json& by_class = j["weights_by_class"];
        if (!by_class.is_object()) throw SchemaError("'weights_by_class' of '" + n.id + "' must be an object");
        for (const auto& [key, list] : by_class.items()) {
            auto cls = parse_innovator_class(key);
            if (!cls) throw SchemaError("unknown class '" + key + "' on node '" + n.id + "'");
            n.children_by_class[*cls] = parse_children(list, n.id);
        }
    }
    if (j.contains("normalization")) {
        if (!n.is_leaf()) throw SchemaError("aggregate node '" + n.id + "' cannot carry a normalization");
        n.scale = parse_scale(j["normalization"], n.id);
    }
    return n;
}

json children_to_json(const std::vector<WeightedChild>& children) {
    json list = json::array();
    for (const auto& c : children) list.push_back({{"id", c.id}, {"weight", c.weight.to_string()}});
    return list;
}

json bounds_to_json(const Normalization& b) {
    return {{"min", b.min}, {"max", b.max}};
}

}  // namespace

IndexTree parse_tree_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("tree config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("tree config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "base" && key != "root" && key != "nodes") throw SchemaError("unknown top-level key '" + key + "'");
    }

    std::map<std::string, Node, std::less<>> nodes;
    std::string root;
    if (doc.contains("base")) {
        if (doc["base"] != std::string(kDefaultTreeName)) {
            throw SchemaError("only \"" + std::string(kDefaultTreeName) + "\" is supported as a base tree");
        }
        IndexTree base = default_wef_tree();
        nodes = base.nodes();
        root = base.root();
    }
    if (doc.contains("root")) {
        if (!doc["root"].is_string()) throw SchemaError("'root' must be a string");
        root = doc["root"].get<std::string>();
    }
    if (root.empty()) throw SchemaError("tree config needs a 'root'");
    if (!doc.contains("nodes") || !doc["nodes"].is_array()) throw SchemaError("tree config needs a 'nodes' array");

    std::set<std::string> listed;
    for (const auto& item : doc["nodes"]) {
        Node n = parse_node(item);
        if (!listed.insert(n.id).second) throw SchemaError("node '" + n.id + "' is listed twice");
        nodes.insert_or_assign(n.id, std::move(n));
    }
    return validate_tree(IndexTree(std::move(nodes), root));
}

IndexTree load_tree(std::string_view spec) {
    if (spec == kDefaultTreeName) return default_wef_tree();
    return parse_tree_json(read_file(std::filesystem::path(spec)));
}

std::string tree_to_json(const IndexTree& tree) {
    json nodes = json::array();
    for (const auto& [id, n] : tree.nodes()) {
        json j = {{"id", id}};
        if (!n.children.empty()) j["children"] = children_to_json(n.children);
        if (!n.children_by_class.empty()) {
            json by_class = json::object();
            for (const auto& [cls, list] : n.children_by_class) by_class[std::string(to_string(cls))] = children_to_json(list);
            j["weights_by_class"] = by_class;
        }
        switch (n.scale.mode) {
            case ScaleMode::None:
                break;
            case ScaleMode::ObservedYear:
                j["normalization"] = "observed";
                break;
            case ScaleMode::ObservedPooled:
                j["normalization"] = "observed-pooled";
                break;
            case ScaleMode::Fixed: {
                json norm = json::object();
                if (n.scale.bounds) norm = bounds_to_json(*n.scale.bounds);
                if (!n.scale.bounds_by_year.empty()) {
                    json by_year = json::object();
                    for (const auto& [year, b] : n.scale.bounds_by_year) by_year[std::to_string(year)] = bounds_to_json(b);
                    norm["by_year"] = by_year;
                }
                j["normalization"] = norm;
                break;
            }
        }
        nodes.push_back(std::move(j));
    }
    json doc = {{"root", tree.root()}, {"nodes", nodes}};
    return doc.dump(2) + "\n";
}

Dataset load_dataset(const DatasetManifest& manifest) {
    ClassMap classes = load_classes(manifest.classes);
    return Dataset{load_panel(manifest.panel, classes), load_tree(manifest.tree), manifest.policy};
}

namespace {

std::map<std::string, std::size_t> column_index(const csv::Row& header) {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < header.fields.size(); ++i) out.emplace(header.fields[i], i);
    return out;
}

std::size_t require_column(const std::map<std::string, std::size_t>& cols, const std::string& name,
                           const std::string& source) {
    auto it = cols.find(name);
    if (it == cols.end()) throw ParseError(source + ":1:1: missing column '" + name + "'");
    return it->second;
}

}  // namespace

ScoreTable load_scores_csv(const std::filesystem::path& path, std::optional<int> year) {
    auto in = open(path);
    const std::string source = path.string();
    auto rows = csv::read(in, source);
    if (rows.empty()) throw ParseError(source + ": missing header");
    auto cols = column_index(rows.front());
    const std::size_t c_year = require_column(cols, "year", source);
    const std::size_t c_country = require_column(cols, "country", source);
    const std::size_t c_node = require_column(cols, "node", source);
    const std::size_t c_score = require_column(cols, "score", source);

    ScoreTable table;
    std::optional<int> seen_year = year;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        expect_fields(row, rows.front().fields.size(), source);
        auto y = csv::to_integer(row.fields[c_year]);
        auto s = csv::to_double(row.fields[c_score]);
        if (!y) throw ParseError(csv::location(source, row.line, row.columns[c_year]) + ": invalid year");
        if (!s) throw ParseError(csv::location(source, row.line, row.columns[c_score]) + ": invalid score");
        if (!seen_year) seen_year = static_cast<int>(*y);
        if (*y != *seen_year) continue;
        auto& by_node = table.entries[row.fields[c_country]];
        if (!by_node.emplace(row.fields[c_node], *s).second) {
            throw DuplicateKeyError(csv::location(source, row.line, 1) + ": duplicate score for (" +
                                    row.fields[c_country] + ", " + row.fields[c_node] + ")");
        }
    }
    if (!seen_year || table.entries.empty()) {
        throw YearNotFoundError("year not found in '" + source + "'");
    }
    table.year = *seen_year;
    return table;
}

RankTable load_ranks_csv(const std::filesystem::path& path, int year) {
    auto in = open(path);
    const std::string source = path.string();
    auto rows = csv::read(in, source);
    if (rows.empty()) throw ParseError(source + ": missing header");
    auto cols = column_index(rows.front());
    const std::size_t c_year = require_column(cols, "year", source);
    const std::size_t c_country = require_column(cols, "country", source);
    const std::size_t c_rank = require_column(cols, "rank", source);
    const auto c_node = cols.find("node");

    RankTable table;
    table.year = year;
    table.node = std::string(wef::kGci);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const csv::Row& row = rows[i];
        expect_fields(row, rows.front().fields.size(), source);
        auto y = csv::to_integer(row.fields[c_year]);
        auto r = csv::to_integer(row.fields[c_rank]);
        if (!y) throw ParseError(csv::location(source, row.line, row.columns[c_year]) + ": invalid year");
        if (!r || *r < 1) throw ParseError(csv::location(source, row.line, row.columns[c_rank]) + ": invalid rank");
        if (*y != year) continue;
        if (c_node != cols.end()) table.node = row.fields[c_node->second];
        if (!table.ranks.emplace(row.fields[c_country], static_cast<int>(*r)).second) {
            throw DuplicateKeyError(csv::location(source, row.line, 1) + ": duplicate rank for '" +
                                    row.fields[c_country] + "'");
        }
    }
    if (table.ranks.empty()) throw YearNotFoundError("year not found: " + std::to_string(year) + " in '" + source + "'");
    return table;
}

}  // namespace gcikit
