#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcikit/index_model.hpp"
#include "gcikit/ranking.hpp"
#include "gcikit/stats.hpp"
#include "gcikit/whatif.hpp"

namespace gcikit {

/// One table cell. Reals always print with six decimals and '.', signed
/// integers always carry an explicit sign (rank deltas: "+9", "-6", "0").
class Cell {
public:
    enum class Kind { Text, Integer, SignedInteger, Real };

    static Cell text(std::string s) { return Cell(Kind::Text, std::move(s), 0, 0.0); }
    static Cell integer(long long v) { return Cell(Kind::Integer, {}, v, 0.0); }
    static Cell signed_integer(long long v) { return Cell(Kind::SignedInteger, {}, v, 0.0); }
    static Cell real(double v) { return Cell(Kind::Real, {}, 0, v); }
    /// Inverse of format(): infers the kind from the text.
    static Cell parse(std::string_view s);

    Kind kind() const { return kind_; }
    const std::string& as_text() const { return text_; }
    long long as_integer() const { return integer_; }
    double as_real() const { return kind_ == Kind::Real ? real_ : static_cast<double>(integer_); }

    std::string format() const;

    friend bool operator==(const Cell&, const Cell&) = default;

private:
    Cell(Kind k, std::string t, long long i, double r) : kind_(k), text_(std::move(t)), integer_(i), real_(r) {}

    Kind kind_;
    std::string text_;
    long long integer_;
    double real_;
};

/// Fixed six-decimal rendering, independent of the C locale.
std::string format_real(double v);

enum class ChartKind { None, Bars, Lines };

/// How the SVG renderer draws a report.
struct ChartSpec {
    ChartKind kind = ChartKind::None;
    std::string x;       // category (bars) or numeric abscissa (lines)
    std::string y;       // numeric column
    std::string series;  // lines only: one polyline per distinct value
    std::string filter_column;
    std::string filter_value;
};

struct Report {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    ChartSpec chart;

    friend bool operator==(const Report& a, const Report& b) {
        return a.columns == b.columns && a.rows == b.rows;
    }
};

enum class Format { Text, Csv, Json, Svg };
std::optional<Format> parse_format(std::string_view name);

/// Throws UnsupportedFormatError when the report has no chart and svg is asked.
std::string render(const Report& report, Format format);
/// Throws SchemaError on an empty report, IoError when the file cannot be written.
void emit_report(const Report& report, Format format, const std::filesystem::path& path);
/// Reads back a csv rendering; render(parse_report_csv(render(r, Csv)), Csv) is
/// byte-identical to render(r, Csv).
Report parse_report_csv(std::string_view text);

// Builders for the library's result types.
Report scores_report(const ScoreTable& scores, const std::vector<std::string>& nodes = {});
Report series_report(const std::vector<ScoreTable>& years, std::string_view node,
                     const std::vector<std::string>& countries = {});
Report ranks_report(const RankTable& ranks, const ScoreTable* scores = nullptr);
Report delta_report(const RankTable& prev, const RankTable& cur, const RankDelta& delta);
Report chisq_report(const ChiSquareResult& result);
Report trend_report(const TrendResult& trend, std::string_view country, std::string_view node, int from, int to);
Report correlation_report(const CorrelationResult& corr, std::string_view country, std::string_view x_node,
                          std::string_view y_node, int from, int to);
Report whatif_report(const Scenario& scenario, const WhatIfOutcome& outcome);
Report rank_gain_report(std::string_view country, std::string_view node, int k, const RankGainSolution& solution);

}  // namespace gcikit
