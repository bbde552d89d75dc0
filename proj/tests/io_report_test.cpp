#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "gcikit/errors.hpp"
#include "gcikit/io.hpp"
#include "gcikit/ranking.hpp"
#include "gcikit/report.hpp"

namespace {

using namespace gcikit;
namespace fs = std::filesystem;

const fs::path kData = GCIKIT_DATA_DIR;

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("gcikit_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) const {
        auto p = dir_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }
    static std::string slurp(const fs::path& p) { return read_file(p); }

    fs::path dir_;
};

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

TEST(PanelCsv, ParsesRowsAndComments) {
    std::istringstream in("# comment\nyear,country,indicator,value\n2006,SI,GW,4.5\r\n2006,SI,CS,3\n\n2005,HR,GW,2.25\n");
    auto obs = parse_panel_csv(in);
    ASSERT_EQ(obs.size(), 3u);
    EXPECT_EQ(obs[0], (Observation{2006, "SI", "GW", 4.5}));
    EXPECT_EQ(obs[2], (Observation{2005, "HR", "GW", 2.25}));
}

TEST(PanelCsv, LocatedErrors) {
    auto parse = [](const std::string& text) {
        return error_of([&] {
            std::istringstream in(text);
            parse_panel_csv(in, "p.csv");
        });
    };
    EXPECT_EQ(parse("year,country,value\n").rfind("p.csv:1:1:", 0), 0u);
    EXPECT_EQ(parse("year,country,indicator,value\n2006,SI,GW\n").rfind("p.csv:2:1:", 0), 0u);
    EXPECT_EQ(parse("year,country,indicator,value\n20x6,SI,GW,4\n").rfind("p.csv:2:1:", 0), 0u);
    EXPECT_EQ(parse("year,country,indicator,value\n2006,SI,GW,abc\n").rfind("p.csv:2:12:", 0), 0u);
    EXPECT_EQ(parse("year,country,indicator,value\n2006,SI,GW,1\n2006,SI,GW,2\n").rfind("p.csv:3:1:", 0), 0u);
    EXPECT_EQ(parse("year,country,indicator,value\n1800,SI,GW,1\n").rfind("p.csv:2:1:", 0), 0u);
    EXPECT_EQ(parse("year,country,indicator,value\n2006,\"SI,GW,1\n").rfind("p.csv:2:", 0), 0u);
    EXPECT_EQ(parse(""), "p.csv: missing header");
}

TEST(PanelCsv, DuplicateIsTyped) {
    std::istringstream in("year,country,indicator,value\n2006,SI,GW,1\n2006,SI,GW,2\n");
    EXPECT_THROW(parse_panel_csv(in), DuplicateKeyError);
}

TEST(ClassesCsv, Parses) {
    std::istringstream in("country,class\nSI,Core\nHR,noncore\n");
    auto m = parse_classes_csv(in);
    EXPECT_EQ(m.at("SI"), InnovatorClass::Core);
    EXPECT_EQ(m.at("HR"), InnovatorClass::NonCore);
    std::istringstream bad("country,class\nSI,middle\n");
    EXPECT_THROW(parse_classes_csv(bad), ParseError);
}

TEST_F(TempDir, LoadPanelSmallFile) {
    auto classes = write("c.csv", "country,class\nA,core\nB,noncore\n");
    auto panel = write("p.csv", "year,country,indicator,value\n2006,A,GW,1\n2006,A,CS,2\n2006,B,GW,3\n2005,B,GW,4\n");
    auto p = load_panel(panel, load_classes(classes));
    EXPECT_EQ(p.observations().size(), 4u);
    auto missing = write("q.csv", "year,country,indicator,value\n2006,Z,GW,1\n");
    EXPECT_THROW(load_panel(missing, load_classes(classes)), MissingClassError);
    EXPECT_THROW(load_panel(dir_ / "nope.csv", {}), IoError);
}

TEST(BundledData, SyntheticPanelLoadsAndScores) {
    auto classes = load_classes(kData / "balkans-classes.csv");
    EXPECT_EQ(classes.size(), 10u);
    for (const auto& [c, cls] : classes) EXPECT_EQ(cls, InnovatorClass::NonCore) << c;
    auto panel = load_panel(kData / "balkans-synthetic.csv", classes);
    EXPECT_EQ(panel.years(), (std::set<int>{2001, 2002, 2003, 2004, 2005, 2006}));
    auto table = compute_all(load_tree("wef-default"), panel, 2006);
    EXPECT_EQ(format_real(*table.score("SI", "GCI")), "4.770000");
    EXPECT_EQ(format_real(*table.score("GR", "GCI")), "4.350000");
    EXPECT_EQ(format_real(*table.score("HR", "GCI")), "4.020000");
}

TEST(BundledData, RankFileCarriesTheRegionalDeltas) {
    auto prev = load_ranks_csv(kData / "balkans-ranks-synthetic.csv", 2005);
    auto cur = load_ranks_csv(kData / "balkans-ranks-synthetic.csv", 2006);
    auto d = rank_delta(prev, cur);
    EXPECT_EQ(d.delta.at("TR"), 9);
    EXPECT_EQ(d.delta.at("HR"), 6);
    EXPECT_EQ(d.delta.at("BG"), -6);
    EXPECT_EQ(d.delta.at("MK"), -2);
    EXPECT_EQ(d.delta.at("SI"), 2);
    EXPECT_EQ(d.delta.at("GR"), 0);
    auto csv = render(delta_report(prev, cur, d), Format::Csv);
    EXPECT_NE(csv.find("TR,68,59,+9,ranked"), std::string::npos) << csv;
    EXPECT_NE(csv.find("BG,61,67,-6,ranked"), std::string::npos) << csv;
    EXPECT_THROW(load_ranks_csv(kData / "balkans-ranks-synthetic.csv", 1999), YearNotFoundError);
}

TEST(BundledData, DefaultTreeFileEqualsBuiltIn) {
    EXPECT_EQ(load_tree((kData / "wef-default-tree.json").string()), default_wef_tree());
}

TEST(TreeJson, DefaultRoundTrips) {
    auto text = tree_to_json(default_wef_tree());
    auto back = parse_tree_json(text);
    EXPECT_EQ(back, default_wef_tree());
    EXPECT_EQ(tree_to_json(back), text);
    EXPECT_EQ(load_tree("wef-default"), default_wef_tree());
}

TEST(TreeJson, OverlayChangesOnlyOneNode) {
    auto tree = parse_tree_json(R"({"base": "wef-default", "nodes": [
        {"id": "ICTS", "children": [{"id": "ICTsd", "weight": "1/2"}, {"id": "ICThd", "weight": "1/2"}]}]})");
    auto base = default_wef_tree();
    ASSERT_EQ(tree.nodes().size(), base.nodes().size());
    for (const auto& [id, node] : base.nodes()) {
        if (id == "ICTS") {
            EXPECT_NE(tree.node(id), node);
            for (const auto& c : tree.node(id).children_for(InnovatorClass::Core)) EXPECT_EQ(c.weight, Rational(1, 2));
        } else {
            EXPECT_EQ(tree.node(id), node) << id;
        }
    }
}

TEST(TreeJson, WeightSumRejected) {
    EXPECT_THROW(parse_tree_json(R"({"base": "wef-default", "nodes": [
        {"id": "ICTS", "children": [{"id": "ICTsd", "weight": "0.4"}, {"id": "ICThd", "weight": "0.5"}]}]})"),
                 WeightSumError);
}

TEST(TreeJson, StandaloneTreeWithNormalizations) {
    auto tree = parse_tree_json(R"({"root": "R", "nodes": [
        {"id": "R", "weights_by_class": {"core": [{"id": "a", "weight": "1/4"}, {"id": "b", "weight": "3/4"}],
                                         "noncore": [{"id": "a", "weight": "1"}]}},
        {"id": "a", "normalization": {"min": 0, "max": 100}},
        {"id": "b", "normalization": {"by_year": {"2006": {"min": 1, "max": 2}}}}]})");
    EXPECT_EQ(tree.node("a").scale.mode, ScaleMode::Fixed);
    EXPECT_EQ(tree.node("b").scale.bounds_by_year.at(2006), (Normalization{1, 2}));
    EXPECT_EQ(parse_tree_json(tree_to_json(tree)), tree);
}

TEST(TreeJson, SchemaErrors) {
    EXPECT_THROW(parse_tree_json("not json"), SchemaError);
    EXPECT_THROW(parse_tree_json(R"({"nodes": []})"), SchemaError);
    EXPECT_THROW(parse_tree_json(R"({"root": "R", "nodes": [{"id": "R", "colour": 1}]})"), SchemaError);
    EXPECT_THROW(parse_tree_json(R"({"root": "R", "nodes": [{"id": "R", "children": [{"id": "x", "weight": "a/b"}]}, {"id": "x"}]})"),
                 SchemaError);
    EXPECT_THROW(parse_tree_json(R"({"root": "R", "nodes": [{"id": "R", "children": [{"id": "x", "weight": "1"}]}]})"),
                 DanglingChildError);
    EXPECT_THROW(load_tree("/no/such/tree.json"), IoError);
}

TEST(CellFormat, NumbersAndSigns) {
    EXPECT_EQ(Cell::real(4.77).format(), "4.770000");
    EXPECT_EQ(Cell::real(-0.0000001).format(), "0.000000");
    EXPECT_EQ(Cell::real(16.918977800).format(), "16.918978");
    EXPECT_EQ(Cell::signed_integer(9).format(), "+9");
    EXPECT_EQ(Cell::signed_integer(-6).format(), "-6");
    EXPECT_EQ(Cell::signed_integer(0).format(), "0");
    EXPECT_EQ(Cell::integer(2006).format(), "2006");
    for (const char* s : {"4.770000", "+9", "-6", "0", "2006", "SI", "DoNotReject"}) {
        EXPECT_EQ(Cell::parse(s).format(), s);
    }
}

TEST(CellFormat, LocaleIndependent) {
    const char* old = std::setlocale(LC_ALL, nullptr);
    std::string saved = old ? old : "C";
    if (std::setlocale(LC_ALL, "de_DE.UTF-8") == nullptr) GTEST_SKIP() << "de_DE locale not installed";
    EXPECT_EQ(format_real(0.5), "0.500000");
    std::setlocale(LC_ALL, saved.c_str());
}

ScoreTable sample_scores() {
    ScoreTable t;
    t.year = 2006;
    t.entries["SI"] = {{"GCI", 4.77}, {"TI", 5.07}};
    t.entries["HR"] = {{"GCI", 4.02}, {"TI", 4.02}};
    t.entries["GR"] = {{"GCI", 1.0 / 3.0 + 4.0}, {"TI", 4.45}};
    return t;
}

TEST(Reports, CsvRoundTripIsByteIdentical) {
    auto scores = sample_scores();
    auto ranks = rank_scores(scores, "GCI");
    std::vector<Report> reports{scores_report(scores), ranks_report(ranks, &scores),
                                chisq_report(chi_square_decision(1.459644, 9, 0.05)),
                                trend_report({-0.242, 488.129, 4}, "MK", "TI", 2003, 2006)};
    for (const auto& r : reports) {
        auto once = render(r, Format::Csv);
        auto back = parse_report_csv(once);
        EXPECT_EQ(render(back, Format::Csv), once);
    }
}

TEST_F(TempDir, ScoresReloadWithinTolerance) {
    auto scores = sample_scores();
    auto path = dir_ / "scores.csv";
    emit_report(scores_report(scores), Format::Csv, path);
    auto back = load_scores_csv(path);
    for (const auto& [c, by_node] : scores.entries) {
        for (const auto& [n, v] : by_node) EXPECT_NEAR(*back.score(c, n), v, 1e-6);
    }
    auto again = dir_ / "again.csv";
    emit_report(scores_report(back), Format::Csv, again);
    EXPECT_EQ(slurp(path), slurp(again));
}

TEST_F(TempDir, EmitIsDeterministic) {
    auto scores = sample_scores();
    for (auto f : {Format::Text, Format::Csv, Format::Json, Format::Svg}) {
        emit_report(scores_report(scores), f, dir_ / "a");
        emit_report(scores_report(scores), f, dir_ / "b");
        EXPECT_EQ(slurp(dir_ / "a"), slurp(dir_ / "b"));
    }
}

TEST_F(TempDir, EmitErrors) {
    Report empty;
    empty.columns = {"x"};
    EXPECT_THROW(emit_report(empty, Format::Csv, dir_ / "e.csv"), SchemaError);
    auto chisq = chisq_report(chi_square_decision(1.0, 2, 0.05));
    EXPECT_THROW(emit_report(chisq, Format::Svg, dir_ / "c.svg"), UnsupportedFormatError);
    EXPECT_THROW(emit_report(scores_report(sample_scores()), Format::Csv, dir_ / "missing" / "x.csv"), IoError);
}

TEST(Reports, JsonIsValidAndOrdered) {
    auto json = render(scores_report(sample_scores()), Format::Json);
    EXPECT_NE(json.find("\"columns\": [\"year\", \"country\", \"node\", \"score\"]"), std::string::npos);
    EXPECT_LT(json.find("\"GR\""), json.find("\"HR\""));
    EXPECT_LT(json.find("\"HR\""), json.find("\"SI\""));
    EXPECT_NE(json.find("\"score\": 4.333333"), std::string::npos) << json;
}

TEST(Reports, SvgCharts) {
    auto scores = sample_scores();
    auto bars = render(scores_report(scores), Format::Svg);
    EXPECT_EQ(bars.rfind("<svg", 0), 0u);
    EXPECT_NE(bars.find("<rect"), std::string::npos);
    ScoreTable earlier = scores;
    earlier.year = 2005;
    auto lines = render(series_report({earlier, scores}, "GCI"), Format::Svg);
    EXPECT_NE(lines.find("<polyline"), std::string::npos);
}

TEST(Reports, RankGainInfeasibleText) {
    RankGainSolution none;
    none.path_weight = Rational(1, 3);
    auto text = render(rank_gain_report("MK", "TI", 99, none), Format::Csv);
    EXPECT_NE(text.find("infeasible"), std::string::npos);
}

}  // namespace
