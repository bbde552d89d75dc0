#include "gcikit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gcikit/errors.hpp"

namespace gcikit {

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kRelativeTolerance = 1e-15;
constexpr double kTiny = 1e-300;

// x^a e^-x / Gamma(a), evaluated in log space
double prefactor(double a, double x) {
    return std::exp(a * std::log(x) - x - std::lgamma(a));
}

// P(a, x) by the power series, valid for x < a + 1.
double lower_series(double a, double x) {
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIterations; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kRelativeTolerance) {
            return sum * prefactor(a, x);
        }
    }
    throw ConvergenceError("incomplete gamma series did not converge for a=" + std::to_string(a) +
                           ", x=" + std::to_string(x));
}

// Q(a, x) by the modified Lentz continued fraction, valid for x >= a + 1.
double upper_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kRelativeTolerance) {
            return h * prefactor(a, x);
        }
    }
    throw ConvergenceError("incomplete gamma continued fraction did not converge for a=" + std::to_string(a) +
                           ", x=" + std::to_string(x));
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0) || !(x >= 0.0) || std::isnan(x)) {
        throw DomainError("incomplete gamma requires a > 0 and x >= 0");
    }
}

void check_df(int df) {
    if (df < 1) throw DomainError("degrees of freedom must be positive, got " + std::to_string(df));
}

double chi_square_density(double x, int df) {
    const double k = 0.5 * df;
    return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k));
}

}  // namespace

std::string_view to_string(Decision d) {
    return d == Decision::Reject ? "Reject" : "DoNotReject";
}

double gamma_p(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_series(a, x);
    return 1.0 - upper_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_series(a, x);
    return upper_continued_fraction(a, x);
}

double chi_square_statistic(std::span<const double> observed, std::span<const double> expected) {
    if (observed.size() != expected.size()) {
        throw LengthMismatchError("observed has " + std::to_string(observed.size()) + " cells, expected has " +
                                  std::to_string(expected.size()));
    }
    if (observed.size() < 2) throw LengthMismatchError("chi-square needs at least two cells");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0.0)) {
            throw NonPositiveExpectedError("expected count at cell " + std::to_string(i) + " is not positive");
        }
        if (!(observed[i] >= 0.0)) {
            throw DomainError("observed count at cell " + std::to_string(i) + " is negative");
        }
        const double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
    }
    return stat;
}

double chi_square_sf(double x, int df) {
    check_df(df);
    if (std::isnan(x)) throw DomainError("chi-square sf of NaN");
    if (x <= 0.0) return 1.0;
    return gamma_q(0.5 * df, 0.5 * x);
}

double chi_square_isf(double alpha, int df) {
    check_df(df);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("significance level must lie in (0, 1)");
    }
    double lo = 0.0;
    double hi = std::max(1.0, static_cast<double>(df));
    while (chi_square_sf(hi, df) > alpha) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw ConvergenceError("chi-square isf bracket did not close");
    }
    // Safeguarded Newton on sf(x) - alpha, which is decreasing in x.
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 500; ++i) {
        const double f = chi_square_sf(x, df) - alpha;
        if (f > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        if (std::fabs(f) <= 1e-14 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return x;
        const double slope = -chi_square_density(x, df);
        double next = slope != 0.0 && std::isfinite(slope) ? x - f / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    throw ConvergenceError("chi-square isf did not converge");
}

ChiSquareResult chi_square_decision(double statistic, int df, double alpha) {
    ChiSquareResult out;
    out.statistic = statistic;
    out.df = df;
    out.alpha = alpha;
    out.p_value = chi_square_sf(statistic, df);
    out.critical_value = chi_square_isf(alpha, df);
    out.decision = statistic > out.critical_value ? Decision::Reject : Decision::DoNotReject;
    return out;
}

ChiSquareResult rank_homogeneity_test(const RankTable& prev, const RankTable& cur, double alpha) {
    std::vector<double> observed;
    std::vector<double> expected;
    for (const auto& [country, rank] : prev.ranks) {
        if (auto it = cur.ranks.find(country); it != cur.ranks.end()) {
            observed.push_back(it->second);
            expected.push_back(rank);
        }
    }
    if (observed.size() < 2) {
        throw EmptyIntersectionError("rank homogeneity test needs at least two common countries");
    }
    const double stat = chi_square_statistic(observed, expected);
    return chi_square_decision(stat, static_cast<int>(observed.size()) - 1, alpha);
}

TrendResult ols_fit(std::span<const std::pair<double, double>> series) {
    if (series.size() < 2) throw DegenerateAbscissaError("trend needs at least two points");
    const double n = static_cast<double>(series.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const auto& [x, y] : series) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : series) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if (sxx == 0.0) throw DegenerateAbscissaError("all abscissae are equal");
    TrendResult out;
    out.slope = sxy / sxx;
    out.intercept = mean_y - out.slope * mean_x;
    out.n = static_cast<int>(series.size());
    return out;
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw LengthMismatchError("x has " + std::to_string(x.size()) + " values, y has " + std::to_string(y.size()));
    }
    if (x.size() < 2) throw LengthMismatchError("correlation needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) throw ZeroVarianceError("correlation of a constant series is undefined");
    CorrelationResult out;
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    out.n = static_cast<int>(x.size());
    return out;
}

}  // namespace gcikit
