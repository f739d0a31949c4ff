#include "qrsim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace qrsim {

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0;
    for (double x : xs) sum += x;
    s.mean = sum / double(s.n);
    if (s.n == 1) return s;
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / double(s.n - 1));
    s.se = s.sd / std::sqrt(double(s.n));
    return s;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: length mismatch");
    std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fit_line: need at least 2 points");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);

    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");

    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;

    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
    return f;
}

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_slope: need at least 3 points");
    std::vector<double> lx, ly;
    double xmin = points[0].first, xmax = points[0].first;
    for (const auto& [px, py] : points) {
        if (!(px > 0.0) || !(py > 0.0))
            throw std::invalid_argument("fit_slope: rates must be positive");
        xmin = std::min(xmin, px);
        xmax = std::max(xmax, px);
        lx.push_back(std::log10(px));
        ly.push_back(std::log10(py));
    }
    if (xmax < 10.0 * xmin)
        throw std::invalid_argument("fit_slope: points must span at least one decade");

    LineFit f = fit_line(lx, ly);
    return {f.slope, f.intercept, f.r2, points.size()};
}

}  // namespace qrsim
