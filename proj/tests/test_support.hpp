#pragma once

// Independent oracles and generators shared by the unit tests and the
// acceptance runner. Nothing here calls into the code under test except to
// build inputs.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gcikit/aggregation.hpp"
#include "gcikit/index_model.hpp"

namespace gcikit::support {

/// Recursive weighted sum straight from the node definitions, no caching,
/// no topological order, weights converted num/den by hand.
inline double brute_force_eval(const IndexTree& tree, const std::string& id, InnovatorClass cls,
                               const std::map<std::string, double>& leaf_values) {
    const Node& n = tree.nodes().at(id);
    if (n.is_leaf()) return leaf_values.at(id);
    double sum = 0.0;
    for (const auto& c : n.children_for(cls)) {
        sum += (static_cast<double>(c.weight.num()) / static_cast<double>(c.weight.den())) *
               brute_force_eval(tree, c.id, cls, leaf_values);
    }
    return sum;
}

/// Random positive integers summing to `den`, returned as weights k/den.
inline std::vector<Rational> random_partition(std::mt19937_64& rng, int parts, int den) {
    std::vector<int> cuts{0, den};
    std::uniform_int_distribution<int> pick(1, den - 1);
    while (static_cast<int>(cuts.size()) < parts + 1) {
        int c = pick(rng);
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Rational> out;
    for (std::size_t i = 1; i < cuts.size(); ++i) out.emplace_back(cuts[i] - cuts[i - 1], den);
    return out;
}

struct RandomTree {
    IndexTree tree;
    std::vector<std::string> leaves;
    std::vector<std::string> aggregates;
};

/// Random DAG of at most `max_nodes` nodes. Aggregates may share children,
/// and the root gets a class-specific weighting half of the time.
inline RandomTree random_tree(std::mt19937_64& rng, int max_nodes = 12) {
    const int total = std::uniform_int_distribution<int>(3, max_nodes)(rng);
    const int n_agg = std::uniform_int_distribution<int>(1, std::max(1, total / 3))(rng);
    const int n_leaf = total - n_agg;

    RandomTree out;
    std::map<std::string, Node, std::less<>> nodes;
    for (int i = 0; i < n_leaf; ++i) {
        std::string id = "L" + std::to_string(i);
        nodes[id] = Node{id, {}, {}, {}};
        out.leaves.push_back(id);
    }
    for (int i = 0; i < n_agg; ++i) out.aggregates.push_back("A" + std::to_string(i));

    // A(i) may point at leaves and at A(j), j > i; it always points at A(i+1)
    // so every aggregate stays reachable from A0.
    auto make_list = [&](int i) {
        std::vector<std::string> pool(out.leaves);
        for (int j = i + 2; j < n_agg; ++j) pool.push_back(out.aggregates[j]);
        std::shuffle(pool.begin(), pool.end(), rng);
        const int cap = std::min<int>(4, static_cast<int>(pool.size()));
        int kids = std::uniform_int_distribution<int>(1, cap)(rng);
        std::vector<std::string> ids(pool.begin(), pool.begin() + kids);
        if (i + 1 < n_agg) ids.push_back(out.aggregates[i + 1]);
        auto weights = random_partition(rng, static_cast<int>(ids.size()), 24);
        std::vector<WeightedChild> list;
        for (std::size_t c = 0; c < ids.size(); ++c) list.push_back({ids[c], weights[c]});
        return list;
    };
    for (int i = 0; i < n_agg; ++i) {
        Node n{out.aggregates[i], {}, {}, {}};
        if (i == 0 && std::bernoulli_distribution(0.5)(rng)) {
            n.children_by_class[InnovatorClass::Core] = make_list(i);
            n.children_by_class[InnovatorClass::NonCore] = make_list(i);
        } else {
            n.children = make_list(i);
        }
        nodes[n.id] = n;
    }
    out.tree = IndexTree(std::move(nodes), out.aggregates.front());
    return out;
}

/// Leaf values on the 1-7 scale for one anonymous country.
inline std::map<std::string, double> random_leaves(std::mt19937_64& rng, const std::vector<std::string>& leaves) {
    std::uniform_real_distribution<double> score(1.0, 7.0);
    std::map<std::string, double> out;
    for (const auto& l : leaves) out[l] = score(rng);
    return out;
}

inline LeafAssignment as_assignment(const std::map<std::string, double>& leaves, const std::string& country = "X") {
    LeafAssignment a;
    for (const auto& [id, v] : leaves) a[{country, id}] = v;
    return a;
}

/// Chi-square density with `df` degrees of freedom.
inline double chi_square_pdf(double x, int df) {
    if (x <= 0.0) return df == 2 ? 0.5 : 0.0;
    const double k = df / 2.0;
    return std::exp((k - 1.0) * std::log(x) - x / 2.0 - k * std::log(2.0) - std::lgamma(k));
}

inline double simpson_adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                               double fb, double whole, double eps, int depth) {
    const double m = (a + b) / 2;
    const double lm = (a + m) / 2;
    const double rm = (m + b) / 2;
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15 * eps) return left + right + (left + right - whole) / 15;
    return simpson_adaptive(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           simpson_adaptive(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a, double b, double eps = 1e-12) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f((a + b) / 2);
    return simpson_adaptive(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, 60);
}

/// P(X > x) by integrating the density. For df = 1 the density is singular at
/// zero, so integrate in t = sqrt(u) where it is smooth.
inline double chi_square_sf_by_quadrature(double x, int df) {
    const double upper = std::max(x, 0.0) + 200.0 + 20.0 * df;
    if (df == 1) {
        auto g = [](double t) { return 2.0 * t * chi_square_pdf(t * t, 1); };
        auto g0 = [&](double t) { return t == 0.0 ? 2.0 / std::sqrt(2.0 * M_PI) : g(t); };
        return simpson(g0, std::sqrt(x), std::sqrt(upper));
    }
    auto f = [df](double u) { return chi_square_pdf(u, df); };
    // Split so the adaptive rule sees the peak near df - 2.
    const double mid = std::max(x, static_cast<double>(df) + 10.0);
    return simpson(f, x, mid) + simpson(f, mid, upper);
}

/// Slope and intercept from the 2x2 normal equations solved by Cramer's rule.
inline std::pair<double, double> normal_equations(const std::vector<std::pair<double, double>>& pts) {
    long double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const long double det = n * sxx - sx * sx;
    const long double intercept = (sy * sxx - sx * sxy) / det;
    const long double slope = (n * sxy - sx * sy) / det;
    return {static_cast<double>(slope), static_cast<double>(intercept)};
}

}  // namespace gcikit::support
