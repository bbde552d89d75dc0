// gcikit command-line front end: compute, rank, delta, trend, correlate,
// chisq, whatif and report over an indicator panel.
//
// Exit codes: 0 success, 1 domain or ingestion error, 2 usage error.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcikit/aggregation.hpp"
#include "gcikit/errors.hpp"
#include "gcikit/io.hpp"
#include "gcikit/ranking.hpp"
#include "gcikit/report.hpp"
#include "gcikit/stats.hpp"
#include "gcikit/whatif.hpp"

namespace {

using namespace gcikit;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct DataFlags {
    std::string data;
    std::string classes;
    std::string tree = std::string(kDefaultTreeName);
    std::string policy = "strict";
};

struct OutputFlags {
    std::string format = "text";
    std::string out;
};

void add_data_flags(CLI::App* cmd, DataFlags& f, bool required = true) {
    auto* data = cmd->add_option("--data", f.data, "Panel CSV (year,country,indicator,value)");
    auto* classes = cmd->add_option("--classes", f.classes, "Class map CSV (country,class)");
    if (required) {
        data->required();
        classes->required();
    }
    cmd->add_option("--tree", f.tree, "Index tree JSON config, or wef-default")->capture_default_str();
    cmd->add_option("--policy", f.policy, "Missing-data policy")
        ->check(CLI::IsMember({"strict", "renormalize"}))
        ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputFlags& f, std::string default_format = "text") {
    f.format = std::move(default_format);
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json", "svg"}))
        ->capture_default_str();
    cmd->add_option("--out", f.out, "Write to this file instead of stdout");
}

Dataset open_dataset(const DataFlags& f) {
    DatasetManifest m;
    m.panel = f.data;
    m.classes = f.classes;
    m.tree = f.tree;
    m.policy = *parse_missing_policy(f.policy);
    return load_dataset(m);
}

void write(const Report& report, const OutputFlags& f) {
    const Format format = *parse_format(f.format);
    if (f.out.empty()) {
        std::cout << render(report, format);
    } else {
        emit_report(report, format, f.out);
    }
}

ScoreTable scores_for(const Dataset& d, int year) {
    return compute_all(d.tree, d.panel, year, d.policy);
}

std::vector<int> years_between(const Dataset& d, int from, int to) {
    std::vector<int> out;
    for (int y : d.panel.years()) {
        if (y >= from && y <= to) out.push_back(y);
    }
    if (out.size() < 2) {
        throw DegenerateAbscissaError("fewer than two years of data between " + std::to_string(from) + " and " +
                                      std::to_string(to));
    }
    return out;
}

std::vector<std::pair<double, double>> node_series(const Dataset& d, const std::vector<int>& years,
                                                   const std::string& country, const std::string& node) {
    std::vector<std::pair<double, double>> series;
    for (int y : years) {
        auto table = scores_for(d, y);
        auto s = table.score(country, node);
        if (!s) throw MissingNodeError("no " + node + " score for '" + country + "' in " + std::to_string(y));
        series.emplace_back(y, *s);
    }
    return series;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Composite competitiveness index engine: scoring, ranking, trends, chi-square and what-if analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "gcikit 0.1.0");

    DataFlags data;
    OutputFlags output;
    std::string node = std::string(wef::kGci);
    int year = 0;
    int prev_year = 0;
    int cur_year = 0;
    double alpha = 0.05;
    std::string country;
    std::string scores_file;
    std::string ranks_file;
    int from = 1990;
    int to = 2100;

    auto* compute = app.add_subcommand("compute", "Score every tree node for every country in one year");
    add_data_flags(compute, data);
    add_output_flags(compute, output);
    compute->add_option("--year", year, "Year to score")->required();
    std::string compute_nodes;
    compute->add_option("--nodes", compute_nodes, "Comma-separated nodes to keep (default: all)");

    auto* rank = app.add_subcommand("rank", "Rank countries on one node (competition ranking)");
    add_data_flags(rank, data, false);
    add_output_flags(rank, output);
    rank->add_option("--year", year, "Year to rank");
    rank->add_option("--node", node, "Node to rank on")->capture_default_str();
    rank->add_option("--scores", scores_file, "Score CSV written by 'compute' instead of --data");

    auto* delta = app.add_subcommand("delta", "Rank change between two years (previous - current)");
    add_data_flags(delta, data, false);
    add_output_flags(delta, output);
    delta->add_option("--prev-year", prev_year, "Earlier year")->required();
    delta->add_option("--cur-year", cur_year, "Later year")->required();
    delta->add_option("--node", node, "Node to rank on")->capture_default_str();
    delta->add_option("--ranks", ranks_file, "Rank CSV (year,country,rank) instead of --data");

    auto* chisq = app.add_subcommand("chisq", "Chi-square test of current-year ranks against previous-year ranks");
    add_data_flags(chisq, data, false);
    add_output_flags(chisq, output);
    chisq->add_option("--prev-year", prev_year, "Earlier year (expected ranks)")->required();
    chisq->add_option("--cur-year", cur_year, "Later year (observed ranks)")->required();
    chisq->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    chisq->add_option("--node", node, "Node to rank on")->capture_default_str();
    chisq->add_option("--ranks", ranks_file, "Rank CSV (year,country,rank) instead of --data");

    auto* trend = app.add_subcommand("trend", "Least-squares yearly trend of one node for one country");
    add_data_flags(trend, data);
    add_output_flags(trend, output);
    trend->add_option("--country", country, "Country code")->required();
    trend->add_option("--node", node, "Node")->capture_default_str();
    trend->add_option("--from", from, "First year (inclusive)");
    trend->add_option("--to", to, "Last year (inclusive)");

    auto* correlate = app.add_subcommand("correlate", "Pearson correlation of two node series for one country");
    add_data_flags(correlate, data);
    add_output_flags(correlate, output);
    std::string nodes_pair = "TI,GCI";
    correlate->add_option("--country", country, "Country code")->required();
    correlate->add_option("--nodes", nodes_pair, "Two comma-separated nodes")->capture_default_str();
    correlate->add_option("--from", from, "First year (inclusive)");
    correlate->add_option("--to", to, "Last year (inclusive)");

    auto* whatif = app.add_subcommand("whatif", "Override one node score for one country and rerank");
    add_data_flags(whatif, data);
    add_output_flags(whatif, output);
    std::optional<double> set_value;
    std::optional<int> gain;
    whatif->add_option("--year", year, "Year")->required();
    whatif->add_option("--country", country, "Country code")->required();
    whatif->add_option("--node", node, "Node to override")->capture_default_str();
    auto* set_opt = whatif->add_option("--set", set_value, "New node score on the 1-7 scale");
    auto* gain_opt = whatif->add_option("--gain", gain, "Solve for the minimal increase that gains this many places");
    set_opt->excludes(gain_opt);

    auto* report = app.add_subcommand("report", "Chart-ready reports: score series or rank deltas");
    add_data_flags(report, data);
    OutputFlags report_output;
    add_output_flags(report, report_output, "svg");
    std::string kind = "series";
    std::string countries;
    report->add_option("--kind", kind, "series (scores by year) or delta (rank changes)")
        ->check(CLI::IsMember({"series", "delta"}))
        ->capture_default_str();
    report->add_option("--node", node, "Node")->capture_default_str();
    report->add_option("--from", from, "First year (series)");
    report->add_option("--to", to, "Last year (series)");
    report->add_option("--prev-year", prev_year, "Earlier year (delta)");
    report->add_option("--cur-year", cur_year, "Later year (delta)");
    report->add_option("--countries", countries, "Comma-separated country filter (series)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    auto need_data = [&](const char* cmd) {
        if (data.data.empty() || data.classes.empty()) {
            std::cerr << cmd << ": --data and --classes are required unless a score/rank file is given\n";
            std::exit(kExitUsage);
        }
    };

    try {
        if (*compute) {
            auto d = open_dataset(data);
            write(scores_report(scores_for(d, year), split_list(compute_nodes)), output);
        } else if (*rank) {
            ScoreTable table;
            if (!scores_file.empty()) {
                table = load_scores_csv(scores_file, year != 0 ? std::optional<int>(year) : std::nullopt);
            } else {
                need_data("rank");
                table = scores_for(open_dataset(data), year);
            }
            write(ranks_report(rank_scores(table, node), &table), output);
        } else if (*delta || *chisq) {
            RankTable prev;
            RankTable cur;
            if (!ranks_file.empty()) {
                prev = load_ranks_csv(ranks_file, prev_year);
                cur = load_ranks_csv(ranks_file, cur_year);
            } else {
                need_data(*delta ? "delta" : "chisq");
                auto d = open_dataset(data);
                prev = rank_scores(scores_for(d, prev_year), node);
                cur = rank_scores(scores_for(d, cur_year), node);
            }
            if (*delta) {
                write(delta_report(prev, cur, rank_delta(prev, cur)), output);
            } else {
                write(chisq_report(rank_homogeneity_test(prev, cur, alpha)), output);
            }
        } else if (*trend) {
            auto d = open_dataset(data);
            auto years = years_between(d, from, to);
            auto series = node_series(d, years, country, node);
            write(trend_report(ols_fit(series), country, node, years.front(), years.back()), output);
        } else if (*correlate) {
            auto names = split_list(nodes_pair);
            if (names.size() != 2) {
                std::cerr << "correlate: --nodes needs exactly two comma-separated nodes\n";
                return kExitUsage;
            }
            auto d = open_dataset(data);
            auto years = years_between(d, from, to);
            std::vector<double> xs;
            std::vector<double> ys;
            for (const auto& [y, v] : node_series(d, years, country, names[0])) xs.push_back(v);
            for (const auto& [y, v] : node_series(d, years, country, names[1])) ys.push_back(v);
            write(correlation_report(pearson(xs, ys), country, names[0], names[1], years.front(), years.back()),
                  output);
        } else if (*whatif) {
            if (!set_value && !gain) {
                std::cerr << "whatif: one of --set or --gain is required\n";
                return kExitUsage;
            }
            auto d = open_dataset(data);
            auto table = scores_for(d, year);
            if (set_value) {
                Scenario scenario{country, node, *set_value};
                write(whatif_report(scenario, apply_scenario(d.tree, table, d.panel.classes(), scenario)), output);
            } else {
                auto solution = min_delta_for_rank_gain(d.tree, table, d.panel.classes(), country, *gain, node);
                write(rank_gain_report(country, node, *gain, solution), output);
            }
        } else if (*report) {
            auto d = open_dataset(data);
            if (kind == "series") {
                std::vector<ScoreTable> tables;
                for (int y : d.panel.years()) {
                    if (y >= from && y <= to) tables.push_back(scores_for(d, y));
                }
                if (tables.empty()) throw YearNotFoundError("year not found in range");
                write(series_report(tables, node, split_list(countries)), report_output);
            } else {
                auto prev = rank_scores(scores_for(d, prev_year), node);
                auto cur = rank_scores(scores_for(d, cur_year), node);
                write(delta_report(prev, cur, rank_delta(prev, cur)), report_output);
            }
        }
    } catch (const gcikit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return 0;
}
