#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace qrsim {

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation
    double se = 0.0;  // standard error of the mean
};

Summary summarize(const std::vector<double>& xs);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

/// Ordinary least squares y = slope*x + intercept. Needs at least two
/// distinct x values.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    std::size_t points_used = 0;
};

/// Log-log scaling fit over (physical error rate, logical error rate) pairs.
/// Requires >= 3 points, all positive, spanning at least one decade in x;
/// anything else is rejected with a diagnostic.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points);

}  // namespace qrsim
