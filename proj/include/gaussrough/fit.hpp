#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gaussrough/errors.hpp"

namespace gaussrough {

/// One observation of a rate experiment: y measured at x, with an optional
/// Monte Carlo standard error attached to y.
struct RatePoint {
    double x = 0.0;
    double y = 0.0;
    double se = 0.0;
};

/// Result of an ordinary least-squares fit of log y against log x.
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0; // in log y units
    double r2 = 0.0;
    std::vector<RatePoint> points;
    std::size_t points_used = 0;
};

/// Least-squares fit of log y vs log x over strictly positive points.
/// Throws DegenerateFitError with fewer than four usable points.
inline RateFit loglog_fit(const std::vector<RatePoint>& points) {
    std::vector<RatePoint> usable;
    for (const auto& p : points) {
        if (p.x > 0.0 && p.y > 0.0) usable.push_back(p);
    }
    if (usable.size() < 4) {
        throw DegenerateFitError("loglog_fit: need at least 4 positive points, got " +
                                 std::to_string(usable.size()));
    }
    const std::size_t n = usable.size();
    double sx = 0, sy = 0;
    for (const auto& p : usable) {
        sx += std::log(p.x);
        sy += std::log(p.y);
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (const auto& p : usable) {
        const double dx = std::log(p.x) - mx;
        const double dy = std::log(p.y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (sxx == 0.0) throw DegenerateFitError("loglog_fit: all x identical");

    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0, ss_tot = 0;
    for (const auto& p : usable) {
        const double ly = std::log(p.y);
        const double pred = fit.intercept + fit.slope * std::log(p.x);
        ss_res += (ly - pred) * (ly - pred);
        ss_tot += (ly - my) * (ly - my);
    }
    fit.r2 = (ss_tot == 0.0) ? 1.0 : 1.0 - ss_res / ss_tot;
    if (fit.r2 < 0.0) fit.r2 = 0.0;
    if (fit.r2 > 1.0) fit.r2 = 1.0;
    fit.points = usable;
    fit.points_used = n;
    return fit;
}

} // namespace gaussrough
