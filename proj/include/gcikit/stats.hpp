#pragma once

#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "gcikit/index_model.hpp"

namespace gcikit {

/// Raised when an iterative kernel exceeds its iteration cap. This signals a
/// bug, not bad input, and is deliberately not a gcikit::Error.
class ConvergenceError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Decision { Reject, DoNotReject };
std::string_view to_string(Decision d);

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 1;
    double p_value = 1.0;
    double critical_value = 0.0;
    double alpha = 0.05;
    Decision decision = Decision::DoNotReject;
};

struct TrendResult {
    double slope = 0.0;
    double intercept = 0.0;
    int n = 0;
};

struct CorrelationResult {
    double r = 0.0;
    int n = 0;
};

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Sum of (O - E)^2 / E. Throws LengthMismatchError, NonPositiveExpectedError
/// or DomainError for negative observations.
double chi_square_statistic(std::span<const double> observed, std::span<const double> expected);

/// Upper-tail probability P(X > x) for X ~ chi-square(df).
double chi_square_sf(double x, int df);

/// Critical value x with chi_square_sf(x, df) == alpha, for 0 < alpha < 1.
double chi_square_isf(double alpha, int df);

/// Fills every field of the result for a precomputed statistic.
ChiSquareResult chi_square_decision(double statistic, int df, double alpha);

/// Goodness-of-fit of current-year ranks (observed) against previous-year
/// ranks (expected) over the countries both tables rank; df = n - 1.
ChiSquareResult rank_homogeneity_test(const RankTable& prev, const RankTable& cur, double alpha);

/// Least-squares line through (year, value) points.
/// Throws DegenerateAbscissaError when every year is equal.
TrendResult ols_fit(std::span<const std::pair<double, double>> series);

/// Throws LengthMismatchError or ZeroVarianceError.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

}  // namespace gcikit
