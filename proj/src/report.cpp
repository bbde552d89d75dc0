#include "gcikit/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "gcikit/errors.hpp"

namespace gcikit {

std::string format_real(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    std::string out(buf, ptr);
    if (out == "-0.000000") out = "0.000000";
    return out;
}

namespace {

std::string format_fixed(double v, int decimals) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, decimals);
    return std::string(buf, ptr);
}

}  // namespace

Cell Cell::parse(std::string_view s) {
    const bool has_sign = !s.empty() && (s.front() == '+' || s.front() == '-');
    if (auto i = csv::to_integer(s); i && s.find('.') == std::string_view::npos) {
        return has_sign ? signed_integer(*i) : integer(*i);
    }
    if (s.find('.') != std::string_view::npos) {
        if (auto d = csv::to_double(s)) return real(*d);
    }
    return text(std::string(s));
}

std::string Cell::format() const {
    switch (kind_) {
        case Kind::Text:
            return text_;
        case Kind::Integer:
            return std::to_string(integer_);
        case Kind::SignedInteger:
            return integer_ > 0 ? "+" + std::to_string(integer_) : std::to_string(integer_);
        case Kind::Real:
            return format_real(real_);
    }
    return {};
}

std::optional<Format> parse_format(std::string_view name) {
    if (name == "text") return Format::Text;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    if (name == "svg") return Format::Svg;
    return std::nullopt;
}

namespace {

std::string render_csv(const Report& r) {
    std::string out;
    for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + csv::quote(r.columns[i]);
    out += "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv::quote(row[i].format());
        out += "\n";
    }
    return out;
}

std::string json_string(std::string_view s) {
    return nlohmann::json(std::string(s)).dump();
}

std::string json_value(const Cell& c) {
    switch (c.kind()) {
        case Cell::Kind::Text:
            return json_string(c.as_text());
        case Cell::Kind::Integer:
        case Cell::Kind::SignedInteger:
            return std::to_string(c.as_integer());
        case Cell::Kind::Real:
            return std::isfinite(c.as_real()) ? format_real(c.as_real()) : "null";
    }
    return "null";
}

std::string render_json(const Report& r) {
    std::string out = "{\n  \"title\": " + json_string(r.title) + ",\n  \"columns\": [";
    for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? ", " : "") + json_string(r.columns[i]);
    out += "],\n  \"rows\": [";
    for (std::size_t j = 0; j < r.rows.size(); ++j) {
        out += j ? ",\n    {" : "\n    {";
        for (std::size_t i = 0; i < r.rows[j].size(); ++i) {
            out += (i ? ", " : "") + json_string(r.columns[i]) + ": " + json_value(r.rows[j][i]);
        }
        out += "}";
    }
    out += r.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string render_text(const Report& r) {
    std::vector<std::size_t> width(r.columns.size());
    for (std::size_t i = 0; i < r.columns.size(); ++i) width[i] = r.columns[i].size();
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : r.rows) {
        std::vector<std::string> line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            line.push_back(row[i].format());
            width[i] = std::max(width[i], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto emit_line = [&](const std::vector<std::string>& line) {
        std::string out;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i) out += "  ";
            out += line[i];
            if (i + 1 < line.size()) out += std::string(width[i] - line[i].size(), ' ');
        }
        return out + "\n";
    };
    std::string out;
    if (!r.title.empty()) out += r.title + "\n";
    out += emit_line(r.columns);
    for (const auto& line : cells) out += emit_line(line);
    return out;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Frame {
    double width = 720, height = 420, left = 70, right = 150, top = 40, bottom = 60;
    double plot_w() const { return width - left - right; }
    double plot_h() const { return height - top - bottom; }
};

std::size_t column_of(const Report& r, const std::string& name) {
    auto it = std::find(r.columns.begin(), r.columns.end(), name);
    if (it == r.columns.end()) throw SchemaError("chart column '" + name + "' not in report");
    return static_cast<std::size_t>(it - r.columns.begin());
}

std::vector<const std::vector<Cell>*> charted_rows(const Report& r) {
    std::vector<const std::vector<Cell>*> out;
    std::optional<std::size_t> filter;
    if (!r.chart.filter_column.empty()) filter = column_of(r, r.chart.filter_column);
    for (const auto& row : r.rows) {
        if (filter && row[*filter].format() != r.chart.filter_value) continue;
        out.push_back(&row);
    }
    return out;
}

std::string svg_open(const Frame& f, const std::string& title) {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_fixed(f.width, 0) +
                      "\" height=\"" + format_fixed(f.height, 0) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + format_fixed(f.width / 2, 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
           xml_escape(title) + "</text>\n";
    return out;
}

std::string axes(const Frame& f, double lo, double hi, const std::string& y_label, const std::string& x_label) {
    std::string out;
    const double x0 = f.left, y0 = f.top + f.plot_h();
    out += "<line x1=\"" + format_fixed(x0, 2) + "\" y1=\"" + format_fixed(f.top, 2) + "\" x2=\"" + format_fixed(x0, 2) +
           "\" y2=\"" + format_fixed(y0, 2) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + format_fixed(x0, 2) + "\" y1=\"" + format_fixed(y0, 2) + "\" x2=\"" +
           format_fixed(x0 + f.plot_w(), 2) + "\" y2=\"" + format_fixed(y0, 2) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = lo + (hi - lo) * i / 4.0;
        const double y = y0 - f.plot_h() * i / 4.0;
        out += "<text x=\"" + format_fixed(x0 - 6, 2) + "\" y=\"" + format_fixed(y + 4, 2) + "\" text-anchor=\"end\">" +
               format_fixed(v, 2) + "</text>\n";
    }
    out += "<text x=\"16\" y=\"" + format_fixed(f.top + f.plot_h() / 2, 2) + "\" transform=\"rotate(-90 16 " +
           format_fixed(f.top + f.plot_h() / 2, 2) + ")\" text-anchor=\"middle\">" + xml_escape(y_label) + "</text>\n";
    out += "<text x=\"" + format_fixed(x0 + f.plot_w() / 2, 2) + "\" y=\"" + format_fixed(f.height - 10, 2) +
           "\" text-anchor=\"middle\">" + xml_escape(x_label) + "</text>\n";
    return out;
}

std::pair<double, double> padded_range(double lo, double hi) {
    if (hi == lo) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

std::string render_bars(const Report& r, const Frame& f) {
    const std::size_t cx = column_of(r, r.chart.x), cy = column_of(r, r.chart.y);
    auto rows = charted_rows(r);
    double lo = 0.0, hi = 0.0;
    for (const auto* row : rows) {
        lo = std::min(lo, (*row)[cy].as_real());
        hi = std::max(hi, (*row)[cy].as_real());
    }
    auto [ylo, yhi] = padded_range(lo, hi);
    auto to_y = [&](double v) { return f.top + f.plot_h() * (yhi - v) / (yhi - ylo); };
    std::string out = svg_open(f, r.title) + axes(f, ylo, yhi, r.chart.y, r.chart.x);
    const double slot = rows.empty() ? 0.0 : f.plot_w() / static_cast<double>(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double v = (*rows[i])[cy].as_real();
        const double top = to_y(std::max(v, 0.0)), base = to_y(std::min(v, 0.0));
        const double x = f.left + slot * (static_cast<double>(i) + 0.15);
        out += "<rect x=\"" + format_fixed(x, 2) + "\" y=\"" + format_fixed(top, 2) + "\" width=\"" +
               format_fixed(slot * 0.7, 2) + "\" height=\"" + format_fixed(base - top, 2) + "\" fill=\"" +
               kPalette[i % std::size(kPalette)] + "\"/>\n";
        out += "<text x=\"" + format_fixed(x + slot * 0.35, 2) + "\" y=\"" + format_fixed(f.top + f.plot_h() + 14, 2) +
               "\" text-anchor=\"middle\">" + xml_escape((*rows[i])[cx].format()) + "</text>\n";
        out += "<text x=\"" + format_fixed(x + slot * 0.35, 2) + "\" y=\"" + format_fixed(top - 3, 2) +
               "\" text-anchor=\"middle\" font-size=\"9\">" + xml_escape((*rows[i])[cy].format()) + "</text>\n";
    }
    return out + "</svg>\n";
}

std::string render_lines(const Report& r, const Frame& f) {
    const std::size_t cx = column_of(r, r.chart.x), cy = column_of(r, r.chart.y), cs = column_of(r, r.chart.series);
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double xlo = INFINITY, xhi = -INFINITY, lo = INFINITY, hi = -INFINITY;
    for (const auto* row : charted_rows(r)) {
        const double x = (*row)[cx].as_real(), y = (*row)[cy].as_real();
        series[(*row)[cs].format()].emplace_back(x, y);
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
    }
    if (series.empty()) {
        xlo = lo = 0.0;
        xhi = hi = 1.0;
    }
    if (xhi == xlo) xhi = xlo + 1.0;
    auto [ylo, yhi] = padded_range(lo, hi);
    auto to_x = [&](double v) { return f.left + f.plot_w() * (v - xlo) / (xhi - xlo); };
    auto to_y = [&](double v) { return f.top + f.plot_h() * (yhi - v) / (yhi - ylo); };
    std::string out = svg_open(f, r.title) + axes(f, ylo, yhi, r.chart.y, r.chart.x);
    std::set<double> ticks;
    for (const auto& [name, pts] : series) {
        for (const auto& p : pts) ticks.insert(p.first);
    }
    for (double t : ticks) {
        out += "<text x=\"" + format_fixed(to_x(t), 2) + "\" y=\"" + format_fixed(f.top + f.plot_h() + 14, 2) +
               "\" text-anchor=\"middle\">" + format_fixed(t, 0) + "</text>\n";
    }
    std::size_t i = 0;
    for (auto& [name, pts] : series) {
        std::sort(pts.begin(), pts.end());
        const char* color = kPalette[i % std::size(kPalette)];
        std::string points;
        for (const auto& [x, y] : pts) points += (points.empty() ? "" : " ") + format_fixed(to_x(x), 2) + "," + format_fixed(to_y(y), 2);
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        for (const auto& [x, y] : pts) {
            out += "<circle cx=\"" + format_fixed(to_x(x), 2) + "\" cy=\"" + format_fixed(to_y(y), 2) +
                   "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        const double ly = f.top + 14.0 * static_cast<double>(i);
        out += "<rect x=\"" + format_fixed(f.width - f.right + 15, 2) + "\" y=\"" + format_fixed(ly, 2) +
               "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
        out += "<text x=\"" + format_fixed(f.width - f.right + 30, 2) + "\" y=\"" + format_fixed(ly + 9, 2) + "\">" +
               xml_escape(name) + "</text>\n";
        ++i;
    }
    return out + "</svg>\n";
}

std::string render_svg(const Report& r) {
    switch (r.chart.kind) {
        case ChartKind::Bars:
            return render_bars(r, Frame{});
        case ChartKind::Lines:
            return render_lines(r, Frame{});
        case ChartKind::None:
            break;
    }
    throw UnsupportedFormatError("report '" + r.title + "' has no chart; svg output is unsupported");
}

}  // namespace

std::string render(const Report& report, Format format) {
    switch (format) {
        case Format::Text:
            return render_text(report);
        case Format::Csv:
            return render_csv(report);
        case Format::Json:
            return render_json(report);
        case Format::Svg:
            return render_svg(report);
    }
    throw UnsupportedFormatError("unknown format");
}

void emit_report(const Report& report, Format format, const std::filesystem::path& path) {
    if (report.rows.empty()) throw SchemaError("refusing to write an empty report to '" + path.string() + "'");
    const std::string bytes = render(report, format);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Report parse_report_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    auto rows = csv::read(in, "<report>", false);
    if (rows.empty()) throw ParseError("<report>: missing header");
    Report r;
    r.columns = rows.front().fields;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].fields.size() != r.columns.size()) {
            throw ParseError(csv::location("<report>", rows[i].line, 1) + ": expected " +
                             std::to_string(r.columns.size()) + " fields");
        }
        std::vector<Cell> cells;
        for (const auto& f : rows[i].fields) cells.push_back(Cell::parse(f));
        r.rows.push_back(std::move(cells));
    }
    return r;
}

Report scores_report(const ScoreTable& scores, const std::vector<std::string>& nodes) {
    Report r;
    r.title = "Scores " + std::to_string(scores.year);
    r.columns = {"year", "country", "node", "score"};
    const std::set<std::string> wanted(nodes.begin(), nodes.end());
    for (const auto& [country, by_node] : scores.entries) {
        for (const auto& [node, score] : by_node) {
            if (!wanted.empty() && !wanted.contains(node)) continue;
            r.rows.push_back({Cell::integer(scores.year), Cell::text(country), Cell::text(node), Cell::real(score)});
        }
    }
    r.chart = {ChartKind::Bars, "country", "score", "", "node", nodes.empty() ? std::string(wef::kGci) : nodes.front()};
    return r;
}

Report series_report(const std::vector<ScoreTable>& years, std::string_view node,
                     const std::vector<std::string>& countries) {
    Report r;
    r.title = std::string(node) + " scores by year";
    r.columns = {"year", "country", "node", "score"};
    const std::set<std::string> wanted(countries.begin(), countries.end());
    std::vector<std::pair<std::string, int>> order;
    for (const auto& table : years) {
        for (const auto& [country, by_node] : table.entries) {
            if (!wanted.empty() && !wanted.contains(country)) continue;
            auto it = by_node.find(std::string(node));
            if (it == by_node.end()) continue;
            r.rows.push_back({Cell::integer(table.year), Cell::text(country), Cell::text(std::string(node)),
                              Cell::real(it->second)});
        }
    }
    std::stable_sort(r.rows.begin(), r.rows.end(), [](const auto& a, const auto& b) {
        if (a[1].as_text() != b[1].as_text()) return a[1].as_text() < b[1].as_text();
        return a[0].as_integer() < b[0].as_integer();
    });
    r.chart = {ChartKind::Lines, "year", "score", "country", "", ""};
    return r;
}

Report ranks_report(const RankTable& ranks, const ScoreTable* scores) {
    Report r;
    r.title = ranks.node + " ranks " + std::to_string(ranks.year);
    r.columns = {"year", "node", "country", "rank"};
    if (scores) r.columns.insert(r.columns.begin() + 3, "score");
    for (const auto& [country, rank] : ranks.ordered()) {
        std::vector<Cell> row = {Cell::integer(ranks.year), Cell::text(ranks.node), Cell::text(country)};
        if (scores) {
            auto s = scores->score(country, ranks.node);
            row.push_back(s ? Cell::real(*s) : Cell::text(""));
        }
        row.push_back(Cell::integer(rank));
        r.rows.push_back(std::move(row));
    }
    r.chart = {ChartKind::Bars, "country", "rank", "", "", ""};
    return r;
}

Report delta_report(const RankTable& prev, const RankTable& cur, const RankDelta& delta) {
    Report r;
    r.title = cur.node + " rank change " + std::to_string(prev.year) + " to " + std::to_string(cur.year);
    r.columns = {"country", "prev_rank", "cur_rank", "delta", "status"};
    for (const auto& [country, d] : delta.delta) {
        r.rows.push_back({Cell::text(country), Cell::integer(prev.ranks.at(country)), Cell::integer(cur.ranks.at(country)),
                          Cell::signed_integer(d), Cell::text("ranked")});
    }
    for (const auto& country : delta.entrants) {
        r.rows.push_back({Cell::text(country), Cell::text(""), Cell::integer(cur.ranks.at(country)), Cell::text(""),
                          Cell::text("entrant")});
    }
    for (const auto& country : delta.leavers) {
        r.rows.push_back({Cell::text(country), Cell::integer(prev.ranks.at(country)), Cell::text(""), Cell::text(""),
                          Cell::text("leaver")});
    }
    r.chart = {ChartKind::Bars, "country", "delta", "", "status", "ranked"};
    return r;
}

Report chisq_report(const ChiSquareResult& result) {
    Report r;
    r.title = "Chi-square rank homogeneity test";
    r.columns = {"statistic", "df", "p_value", "critical_value", "alpha", "decision"};
    r.rows.push_back({Cell::real(result.statistic), Cell::integer(result.df), Cell::real(result.p_value),
                      Cell::real(result.critical_value), Cell::real(result.alpha),
                      Cell::text(std::string(to_string(result.decision)))});
    return r;
}

Report trend_report(const TrendResult& trend, std::string_view country, std::string_view node, int from, int to) {
    Report r;
    r.title = std::string(node) + " linear trend for " + std::string(country);
    r.columns = {"country", "node", "from", "to", "n", "slope", "intercept"};
    r.rows.push_back({Cell::text(std::string(country)), Cell::text(std::string(node)), Cell::integer(from),
                      Cell::integer(to), Cell::integer(trend.n), Cell::real(trend.slope), Cell::real(trend.intercept)});
    return r;
}

Report correlation_report(const CorrelationResult& corr, std::string_view country, std::string_view x_node,
                          std::string_view y_node, int from, int to) {
    Report r;
    r.title = "Pearson correlation for " + std::string(country);
    r.columns = {"country", "x_node", "y_node", "from", "to", "n", "r"};
    r.rows.push_back({Cell::text(std::string(country)), Cell::text(std::string(x_node)), Cell::text(std::string(y_node)),
                      Cell::integer(from), Cell::integer(to), Cell::integer(corr.n), Cell::real(corr.r)});
    return r;
}

Report whatif_report(const Scenario& scenario, const WhatIfOutcome& outcome) {
    Report r;
    r.title = "What-if: " + scenario.country + " " + scenario.node + " = " + format_real(scenario.override_score);
    r.columns = {"country", "node", "override", "baseline_gci", "new_gci", "baseline_rank", "new_rank", "delta_rank"};
    r.rows.push_back({Cell::text(scenario.country), Cell::text(scenario.node), Cell::real(scenario.override_score),
                      Cell::real(outcome.baseline_gci), Cell::real(outcome.new_gci), Cell::integer(outcome.baseline_rank),
                      Cell::integer(outcome.new_rank), Cell::signed_integer(outcome.delta_rank)});
    return r;
}

Report rank_gain_report(std::string_view country, std::string_view node, int k, const RankGainSolution& solution) {
    Report r;
    r.title = "Minimal " + std::string(node) + " increase for " + std::string(country) + " to gain " +
              std::to_string(k) + " place(s)";
    r.columns = {"country", "node", "gain", "path_weight", "current_score", "target_gci", "delta", "new_score"};
    std::vector<Cell> row = {Cell::text(std::string(country)), Cell::text(std::string(node)), Cell::integer(k),
                             Cell::text(solution.path_weight.to_string()), Cell::real(solution.current_node_score),
                             Cell::real(solution.target_gci)};
    if (solution.delta) {
        row.push_back(Cell::real(*solution.delta));
        row.push_back(Cell::real(solution.current_node_score + *solution.delta));
    } else {
        row.push_back(Cell::text("infeasible"));
        row.push_back(Cell::text("infeasible"));
    }
    r.rows.push_back(std::move(row));
    return r;
}

}  // namespace gcikit
