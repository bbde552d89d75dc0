#include <gtest/gtest.h>

#include <random>

#include "gcikit/aggregation.hpp"
#include "gcikit/errors.hpp"
#include "test_support.hpp"

namespace {

using namespace gcikit;

constexpr double kTight = 1e-12;

std::map<std::string, double> default_leaves(double value) {
    std::map<std::string, double> out;
    for (const auto& id : default_wef_tree().reachable_leaves(InnovatorClass::NonCore)) out[id] = value;
    return out;
}

TEST(NormalizeMinMax, Endpoints) {
    Normalization n{10.0, 70.0};
    EXPECT_DOUBLE_EQ(normalize_minmax(10.0, n), 1.0);
    EXPECT_DOUBLE_EQ(normalize_minmax(70.0, n), 7.0);
    EXPECT_DOUBLE_EQ(normalize_minmax(40.0, n), 4.0);
}

TEST(NormalizeMinMax, ClampsOutside) {
    Normalization n{0.0, 1.0};
    EXPECT_DOUBLE_EQ(normalize_minmax(-5.0, n), 1.0);
    EXPECT_DOUBLE_EQ(normalize_minmax(5.0, n), 7.0);
}

TEST(NormalizeMinMax, DegenerateRange) {
    EXPECT_THROW(normalize_minmax(1.0, Normalization{2.0, 2.0}), DegenerateRangeError);
    EXPECT_THROW(normalize_minmax(1.0, Normalization{3.0, 2.0}), DegenerateRangeError);
}

TEST(NormalizeMinMax, StaysOnScale) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int i = 0; i < 1000; ++i) {
        double a = u(rng);
        double b = a + std::abs(u(rng)) + 1e-3;
        double s = normalize_minmax(u(rng), {a, b});
        EXPECT_GE(s, 1.0);
        EXPECT_LE(s, 7.0);
    }
}

// Hand-derived node values: ICTsd, ICThd, IS and TTS fixed directly.
TEST(EvaluateNode, TechnologyIndexByClass) {
    auto tree = default_wef_tree().truncated_at({"IS", "TTS", "ICTsd", "ICThd"});
    LeafAssignment leaves{{{"X", "IS"}, 4.0}, {{"X", "TTS"}, 4.0}, {{"X", "ICTsd"}, 3.0}, {{"X", "ICThd"}, 6.0}};
    EXPECT_NEAR(evaluate_node(tree, "ICTS", InnovatorClass::NonCore, leaves, "X"), 5.0, kTight);
    EXPECT_NEAR(evaluate_node(tree, "TI", InnovatorClass::NonCore, leaves, "X"), 4.5, kTight);
    EXPECT_NEAR(evaluate_node(tree, "TI", InnovatorClass::Core, leaves, "X"), 4.5, kTight);
}

TEST(EvaluateNode, GciByClass) {
    auto tree = default_wef_tree().truncated_at({"TI", "CLS", "CS", "MSS", "CCR", "GW"});
    LeafAssignment leaves{{{"X", "TI"}, 4.5}, {{"X", "CLS"}, 3.0}, {{"X", "CS"}, 5.0},
                          {{"X", "MSS"}, 4.0}, {{"X", "CCR"}, 6.0}, {{"X", "GW"}, 2.0}};
    EXPECT_NEAR(evaluate_node(tree, "PII", InnovatorClass::NonCore, leaves, "X"), 4.0, kTight);
    EXPECT_NEAR(evaluate_node(tree, "MEI", InnovatorClass::NonCore, leaves, "X"), 4.0, kTight);
    EXPECT_NEAR(evaluate_node(tree, "GCI", InnovatorClass::NonCore, leaves, "X"), 12.5 / 3.0, kTight);
    EXPECT_NEAR(evaluate_node(tree, "GCI", InnovatorClass::Core, leaves, "X"), 4.25, kTight);
}

TEST(EvaluateNode, EqualComponentsGiveThatValue) {
    auto tree = default_wef_tree().truncated_at({"TI", "PII", "MEI"});
    for (double s : {1.0, 3.3, 7.0}) {
        LeafAssignment leaves{{{"X", "TI"}, s}, {{"X", "PII"}, s}, {{"X", "MEI"}, s}};
        for (auto cls : kAllClasses) EXPECT_NEAR(evaluate_node(tree, "GCI", cls, leaves, "X"), s, kTight);
    }
}

TEST(EvaluateNode, EqualLeavesEverywhere) {
    // Hard-data leaves are min-max scaled, so pin their bounds so that s maps to s.
    auto tree = default_wef_tree();
    LeafBounds bounds;
    for (const auto& id : wef::kIctHardLeaves) bounds[id] = Normalization{1.0, 7.0};
    for (double s : {1.0, 2.5, 6.25}) {
        auto leaves = support::as_assignment(default_leaves(s));
        for (auto cls : kAllClasses) {
            Evaluator ev(tree, bounds);
            for (const auto& [id, v] : ev.evaluate_all(cls, leaves, "X")) EXPECT_NEAR(v, s, kTight) << id;
        }
    }
}

TEST(EvaluateNode, ClassSensitivity) {
    // TI above the mean of PII and MEI: core weighting (1/2 on TI) wins.
    auto tree = default_wef_tree().truncated_at({"TI", "PII", "MEI"});
    LeafAssignment leaves{{{"X", "TI"}, 5.0}, {{"X", "PII"}, 3.0}, {{"X", "MEI"}, 4.0}};
    double core = evaluate_node(tree, "GCI", InnovatorClass::Core, leaves, "X");
    double noncore = evaluate_node(tree, "GCI", InnovatorClass::NonCore, leaves, "X");
    EXPECT_GT(core, noncore);
    EXPECT_NEAR(core, 4.25, kTight);
    EXPECT_NEAR(noncore, 4.0, kTight);
}

TEST(EvaluateNode, StrictMissingLeaf) {
    auto tree = default_wef_tree().truncated_at({"TI", "PII", "MEI"});
    LeafAssignment leaves{{{"X", "TI"}, 5.0}, {{"X", "PII"}, 3.0}};
    EXPECT_THROW(evaluate_node(tree, "GCI", InnovatorClass::NonCore, leaves, "X"), MissingLeafError);
}

TEST(EvaluateNode, RenormalizeDropsMissingChildren) {
    auto tree = default_wef_tree().truncated_at({"TI", "PII", "MEI"});
    LeafAssignment leaves{{{"X", "TI"}, 5.0}, {{"X", "PII"}, 3.0}};
    // Core: (1/2*5 + 1/4*3) / (3/4)
    EXPECT_NEAR(evaluate_node(tree, "GCI", InnovatorClass::Core, leaves, "X", MissingPolicy::Renormalize),
                (2.5 + 0.75) / 0.75, kTight);
    EXPECT_NEAR(evaluate_node(tree, "GCI", InnovatorClass::NonCore, leaves, "X", MissingPolicy::Renormalize), 4.0,
                kTight);
}

TEST(EvaluateNode, RenormalizeWithNothingPresent) {
    auto tree = default_wef_tree().truncated_at({"TI", "PII", "MEI"});
    EXPECT_THROW(evaluate_node(tree, "GCI", InnovatorClass::Core, {}, "X", MissingPolicy::Renormalize),
                 MissingLeafError);
}

TEST(EvaluateNode, SurveyLeafOutOfScale) {
    auto tree = default_wef_tree().truncated_at({"TI", "PII", "MEI"});
    LeafAssignment leaves{{{"X", "TI"}, 7.5}, {{"X", "PII"}, 3.0}, {{"X", "MEI"}, 3.0}};
    EXPECT_THROW(evaluate_node(tree, "GCI", InnovatorClass::Core, leaves, "X"), OutOfScaleError);
    leaves[{"X", "TI"}] = 0.5;
    EXPECT_THROW(evaluate_node(tree, "GCI", InnovatorClass::Core, leaves, "X"), OutOfScaleError);
}

TEST(EvaluateNode, UnknownNode) {
    EXPECT_THROW(evaluate_node(default_wef_tree(), "XYZ", InnovatorClass::Core, {}, "X"), UnknownNodeError);
}

TEST(EvaluateNode, MatchesBruteForceOracleOnRandomTrees) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 500; ++i) {
        auto rt = support::random_tree(rng);
        auto tree = validate_tree(rt.tree);
        auto leaves = support::random_leaves(rng, rt.leaves);
        auto assignment = support::as_assignment(leaves);
        for (auto cls : kAllClasses) {
            for (const auto& id : tree.topological_order(cls)) {
                EXPECT_NEAR(evaluate_node(tree, id, cls, assignment, "X"),
                            support::brute_force_eval(tree, id, cls, leaves), kTight);
            }
        }
    }
}

TEST(EvaluateNode, ConvexityOnRandomTrees) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        auto rt = support::random_tree(rng);
        auto leaves = support::as_assignment(support::random_leaves(rng, rt.leaves));
        for (auto cls : kAllClasses) {
            Evaluator ev(rt.tree);
            auto all = ev.evaluate_all(cls, leaves, "X");
            for (const auto& id : rt.aggregates) {
                if (!all.contains(id)) continue;
                double lo = 8.0;
                double hi = 0.0;
                for (const auto& c : rt.tree.node(id).children_for(cls)) {
                    lo = std::min(lo, all.at(c.id));
                    hi = std::max(hi, all.at(c.id));
                }
                EXPECT_GE(all.at(id), lo - 1e-12);
                EXPECT_LE(all.at(id), hi + 1e-12);
            }
        }
    }
}

TEST(EvaluateNode, MonotoneInEveryLeaf) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        auto rt = support::random_tree(rng);
        auto base = support::random_leaves(rng, rt.leaves);
        const auto& leaf = rt.leaves[i % rt.leaves.size()];
        auto raised = base;
        raised[leaf] = std::min(7.0, raised[leaf] + bump(rng));
        for (auto cls : kAllClasses) {
            Evaluator ev(rt.tree);
            auto a = ev.evaluate_all(cls, support::as_assignment(base), "X");
            auto b = ev.evaluate_all(cls, support::as_assignment(raised), "X");
            for (const auto& [id, v] : a) EXPECT_GE(b.at(id), v - 1e-12) << id;
        }
    }
}

Panel small_panel() {
    ClassMap classes{{"A", InnovatorClass::NonCore}, {"B", InnovatorClass::Core}};
    std::vector<Observation> obs;
    auto tree = default_wef_tree();
    int k = 0;
    for (const char* c : {"A", "B"}) {
        for (const auto& id : tree.reachable_leaves(InnovatorClass::NonCore)) {
            double v = 2.0 + (k++ % 7) * 0.5;
            bool hard = std::find(wef::kIctHardLeaves.begin(), wef::kIctHardLeaves.end(), id) !=
                        wef::kIctHardLeaves.end();
            obs.push_back({2006, c, id, hard ? v * 10.0 : v});
        }
    }
    return Panel(obs, classes);
}

TEST(ComputeAll, ScoresEveryReachableNode) {
    auto tree = default_wef_tree();
    auto table = compute_all(tree, small_panel(), 2006);
    EXPECT_EQ(table.year, 2006);
    ASSERT_EQ(table.entries.size(), 2u);
    for (const auto& [country, scores] : table.entries) {
        auto cls = country == "A" ? InnovatorClass::NonCore : InnovatorClass::Core;
        for (const auto& id : tree.topological_order(cls)) {
            ASSERT_TRUE(scores.contains(id)) << country << " " << id;
            EXPECT_GE(scores.at(id), 1.0);
            EXPECT_LE(scores.at(id), 7.0);
        }
    }
}

TEST(ComputeAll, HardLeavesUseObservedYearBounds) {
    auto table = compute_all(default_wef_tree(), small_panel(), 2006);
    // With two countries every hard leaf normalizes to exactly 1 or 7.
    for (const auto& [country, scores] : table.entries) {
        for (const auto& id : wef::kIctHardLeaves) {
            double s = scores.at(id);
            EXPECT_TRUE(s == 1.0 || s == 7.0) << country << " " << id << " " << s;
        }
    }
}

TEST(ComputeAll, MatchesRecursiveOracle) {
    auto tree = default_wef_tree();
    auto panel = small_panel();
    auto table = compute_all(tree, panel, 2006);
    auto bounds = resolve_bounds(tree, panel, 2006);
    for (const auto& [country, scores] : table.entries) {
        auto cls = panel.class_of(country);
        std::map<std::string, double> leaves;
        for (const auto& id : tree.reachable_leaves(cls)) {
            double raw = *panel.value(2006, country, id);
            auto b = bounds.find(id);
            leaves[id] = b == bounds.end() ? raw : normalize_minmax(raw, b->second);
        }
        EXPECT_NEAR(scores.at("GCI"), support::brute_force_eval(tree, "GCI", cls, leaves), kTight);
    }
}

TEST(ComputeAll, YearNotFound) {
    try {
        compute_all(default_wef_tree(), small_panel(), 1999);
        FAIL();
    } catch (const YearNotFoundError& e) {
        EXPECT_NE(std::string(e.what()).find("year not found"), std::string::npos);
    }
}

TEST(ComputeAll, StrictListsEveryMissingPair) {
    auto panel = small_panel();
    std::vector<Observation> obs;
    for (const auto& o : panel.observations()) {
        if (!(o.indicator == "GW" || (o.country == "B" && o.indicator == "IS"))) obs.push_back(o);
    }
    Panel thinned(obs, panel.classes());
    try {
        compute_all(default_wef_tree(), thinned, 2006);
        FAIL();
    } catch (const MissingLeafError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("(A, GW)"), std::string::npos) << msg;
        EXPECT_NE(msg.find("(B, GW)"), std::string::npos) << msg;
        EXPECT_NE(msg.find("(B, IS)"), std::string::npos) << msg;
    }
    EXPECT_NO_THROW(compute_all(default_wef_tree(), thinned, 2006, MissingPolicy::Renormalize));
}

TEST(ComputeAll, Deterministic) {
    auto tree = default_wef_tree();
    auto panel = small_panel();
    EXPECT_EQ(compute_all(tree, panel, 2006), compute_all(tree, panel, 2006));
}

IndexTree with_scale(const std::string& leaf, LeafScale scale) {
    auto nodes = default_wef_tree().nodes();
    nodes.at(leaf).scale = std::move(scale);
    return validate_tree(IndexTree(nodes, "GCI"));
}

TEST(ResolveBounds, ModesAndDegenerateRange) {
    ClassMap classes{{"A", InnovatorClass::Core}, {"B", InnovatorClass::Core}};
    std::vector<Observation> obs{{2005, "A", "internet_users", 1.0}, {2005, "B", "internet_users", 9.0},
                                 {2006, "A", "internet_users", 3.0}, {2006, "B", "internet_users", 5.0}};
    Panel panel(obs, classes);

    auto pooled = with_scale("internet_users", {ScaleMode::ObservedPooled, {}, {}});
    EXPECT_EQ(resolve_bounds(pooled, panel, 2006).at("internet_users"), (Normalization{1.0, 9.0}));
    auto yearly = with_scale("internet_users", {ScaleMode::ObservedYear, {}, {}});
    EXPECT_EQ(resolve_bounds(yearly, panel, 2006).at("internet_users"), (Normalization{3.0, 5.0}));
    auto fixed = with_scale("internet_users",
                            {ScaleMode::Fixed, Normalization{0.0, 100.0}, {{2006, Normalization{0.0, 10.0}}}});
    EXPECT_EQ(resolve_bounds(fixed, panel, 2006).at("internet_users"), (Normalization{0.0, 10.0}));
    EXPECT_EQ(resolve_bounds(fixed, panel, 2005).at("internet_users"), (Normalization{0.0, 100.0}));

    Panel flat({{2006, "A", "internet_users", 3.0}, {2006, "B", "internet_users", 3.0}}, classes);
    EXPECT_THROW(resolve_bounds(yearly, flat, 2006), DegenerateRangeError);
}

TEST(MissingPolicyText, RoundTrips) {
    for (auto p : {MissingPolicy::Strict, MissingPolicy::Renormalize}) {
        EXPECT_EQ(parse_missing_policy(to_string(p)), p);
    }
    EXPECT_FALSE(parse_missing_policy("lenient").has_value());
}

}  // namespace
