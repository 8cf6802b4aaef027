#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gaussrough/covariance.hpp"
#include "gaussrough/errors.hpp"
#include "gaussrough/fit.hpp"

namespace gaussrough::var {

using cov::CovarianceModel;
using cov::Interval;
using cov::Rectangle;

// ---------------------------------------------------------------------------
// Dissections
// ---------------------------------------------------------------------------

/// Strictly increasing list of at least two grid points.
struct Dissection {
    std::vector<double> points;

    Dissection() = default;
    explicit Dissection(std::vector<double> pts) : points(std::move(pts)) {
        if (points.size() < 2) throw ConfigError("Dissection: need at least two points");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (!(points[i] > points[i - 1]))
                throw ConfigError("Dissection: points must be strictly increasing");
    }

    static Dissection equispaced(const Interval& iv, std::size_t n) {
        if (n < 2) throw ConfigError("Dissection: need at least two points");
        std::vector<double> pts(n);
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        pts.back() = iv.hi;
        return Dissection(std::move(pts));
    }

    std::size_t size() const { return points.size(); }
    double front() const { return points.front(); }
    double back() const { return points.back(); }
};

// ---------------------------------------------------------------------------
// Grid-restricted two-parameter functions
// ---------------------------------------------------------------------------

/// A two-parameter function sampled on a product grid. Rectangular increments
/// of any sub-rectangle spanned by grid nodes come straight from the corner
/// values.
class GridSurface {
  public:
    GridSurface(Dissection grid_h, Dissection grid_v, std::vector<std::vector<double>> values)
        : gh_(std::move(grid_h)), gv_(std::move(grid_v)), vals_(std::move(values)) {
        if (vals_.size() != gh_.size())
            throw GridMismatchError("GridSurface: row count does not match horizontal grid");
        for (const auto& row : vals_)
            if (row.size() != gv_.size())
                throw GridMismatchError("GridSurface: column count does not match vertical grid");
    }

    static GridSurface from_model(const CovarianceModel& m, const Dissection& grid_h,
                                  const Dissection& grid_v) {
        std::vector<std::vector<double>> vals(grid_h.size(), std::vector<double>(grid_v.size()));
        for (std::size_t i = 0; i < grid_h.size(); ++i)
            for (std::size_t j = 0; j < grid_v.size(); ++j)
                vals[i][j] = cov::eval(m, grid_h.points[i], grid_v.points[j]);
        return GridSurface(grid_h, grid_v, std::move(vals));
    }

    const Dissection& grid_h() const { return gh_; }
    const Dissection& grid_v() const { return gv_; }
    std::size_t n() const { return gh_.size(); }
    std::size_t m() const { return gv_.size(); }

    /// Increment over [x_a, x_b] x [y_c, y_d] (node indices, a < b, c < d).
    double increment(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
        return vals_[a][c] - vals_[a][d] - vals_[b][c] + vals_[b][d];
    }

    GridSurface operator+(const GridSurface& other) const {
        if (gh_.points != other.gh_.points || gv_.points != other.gv_.points)
            throw GridMismatchError("GridSurface: grids differ");
        auto vals = vals_;
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = 0; j < vals[i].size(); ++j) vals[i][j] += other.vals_[i][j];
        return GridSurface(gh_, gv_, std::move(vals));
    }

  private:
    Dissection gh_, gv_;
    std::vector<std::vector<double>> vals_;
};

// ---------------------------------------------------------------------------
// 1D p-variation
// ---------------------------------------------------------------------------

/**
 * Maximum over sub-dissections of a grid of sum w(i,j)^p-style cell weights.
 * The weight callable must already be raised to the relevant power; the
 * return value is the un-rooted maximal sum, found by dynamic programming.
 */
template <class Weight>
double max_partition_sum(std::size_t n, const Weight& w, std::vector<std::size_t>* parents = nullptr) {
    std::vector<double> best(n, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> par(n, 0);
    best[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double cand = best[i] + w(i, j);
            if (cand > best[j]) {
                best[j] = cand;
                par[j] = i;
            }
        }
    }
    if (parents) *parents = std::move(par);
    return best[n - 1];
}

/// Exact p-variation of sampled values over all sub-dissections of the
/// sample grid: sup (sum |x_{t_{i+1}} - x_{t_i}|^p)^(1/p).
inline double pvar_1d(const std::vector<double>& samples, double p) {
    if (p < 1.0) throw BadExponentError("pvar_1d: p must be >= 1");
    if (samples.size() < 2) throw ConfigError("pvar_1d: need at least two samples");
    const double sum = max_partition_sum(samples.size(), [&](std::size_t i, std::size_t j) {
        return std::pow(std::abs(samples[j] - samples[i]), p);
    });
    return std::pow(sum, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Mixed (gamma, rho)-variation over grids
// ---------------------------------------------------------------------------

enum class Mode { exact, lower, greedy };

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::exact: return "exact";
        case Mode::lower: return "lower";
        case Mode::greedy: return "greedy";
    }
    return "?";
}

struct VariationEstimate {
    double value = 0.0;
    double gamma = 1.0;
    double rho = 1.0;
    Rectangle rect;
    Mode mode = Mode::lower;
    Dissection argmax_h, argmax_v; // populated for exact and greedy modes
};

/// Grid points per axis above which exact enumeration is refused.
inline constexpr std::size_t max_exact_points = 12;

namespace detail {

inline void check_exponents(double gamma, double rho) {
    if (gamma < 1.0 || rho < 1.0)
        throw BadExponentError("variation exponents must satisfy gamma, rho >= 1");
}

/// Double power sum at fixed dissections (node index subsets).
inline double power_sum(const GridSurface& g, const std::vector<std::size_t>& hn,
                        const std::vector<std::size_t>& vn, double gamma, double rho) {
    double outer = 0.0;
    for (std::size_t j = 0; j + 1 < vn.size(); ++j) {
        double inner = 0.0;
        for (std::size_t i = 0; i + 1 < hn.size(); ++i)
            inner += std::pow(std::abs(g.increment(hn[i], hn[i + 1], vn[j], vn[j + 1])), gamma);
        outer += std::pow(inner, rho / gamma);
    }
    return std::pow(outer, 1.0 / rho);
}

inline std::vector<std::size_t> full_index_set(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

inline std::vector<std::size_t> mask_to_nodes(std::uint32_t mask, std::size_t n) {
    std::vector<std::size_t> nodes;
    nodes.push_back(0);
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (mask & (1u << (i - 1))) nodes.push_back(i);
    nodes.push_back(n - 1);
    return nodes;
}

/// Exact supremum: horizontal sub-dissections are enumerated, and for each
/// one the outer sum is additive over vertical cells, so the optimal vertical
/// dissection comes from a max-sum partition DP.
inline double exact_sup(const GridSurface& g, double gamma, double rho,
                        std::vector<std::size_t>* best_h, std::vector<std::size_t>* best_v) {
    const std::size_t n = g.n(), m = g.m();
    const std::uint32_t interior = static_cast<std::uint32_t>(n - 2);
    const double exponent = rho / gamma;

    double best = -std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 0; mask < (1u << interior); ++mask) {
        const auto hn = mask_to_nodes(mask, n);
        const auto strip = [&](std::size_t c, std::size_t d) {
            double inner = 0.0;
            for (std::size_t i = 0; i + 1 < hn.size(); ++i)
                inner += std::pow(std::abs(g.increment(hn[i], hn[i + 1], c, d)), gamma);
            return std::pow(inner, exponent);
        };
        const double cand = max_partition_sum(m, strip);
        if (cand > best) {
            best = cand;
            best_mask = mask;
        }
    }
    if (best_h && best_v) {
        const auto hn = mask_to_nodes(best_mask, n);
        const auto strip = [&](std::size_t c, std::size_t d) {
            double inner = 0.0;
            for (std::size_t i = 0; i + 1 < hn.size(); ++i)
                inner += std::pow(std::abs(g.increment(hn[i], hn[i + 1], c, d)), gamma);
            return std::pow(inner, exponent);
        };
        std::vector<std::size_t> parents;
        max_partition_sum(m, strip, &parents);
        std::vector<std::size_t> vn;
        for (std::size_t j = m - 1;; j = parents[j]) {
            vn.push_back(j);
            if (j == 0) break;
        }
        std::reverse(vn.begin(), vn.end());
        *best_h = hn;
        *best_v = vn;
    }
    return std::pow(best, 1.0 / rho);
}

/// Steepest-ascent hill climbing over single-point insertions/deletions of
/// interior grid points on both axes, deterministic ascending scan order.
inline double greedy_sup(const GridSurface& g, double gamma, double rho,
                         std::vector<std::size_t>* out_h, std::vector<std::size_t>* out_v) {
    const std::size_t n = g.n(), m = g.m();
    std::vector<bool> inc_h(n, true), inc_v(m, true);
    const auto nodes_of = [](const std::vector<bool>& inc) {
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < inc.size(); ++i)
            if (inc[i]) nodes.push_back(i);
        return nodes;
    };
    double cur = power_sum(g, nodes_of(inc_h), nodes_of(inc_v), gamma, rho);
    while (true) {
        double best_val = cur;
        int best_axis = -1;
        std::size_t best_idx = 0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            inc_h[i] = !inc_h[i];
            const double v = power_sum(g, nodes_of(inc_h), nodes_of(inc_v), gamma, rho);
            inc_h[i] = !inc_h[i];
            if (v > best_val) {
                best_val = v;
                best_axis = 0;
                best_idx = i;
            }
        }
        for (std::size_t j = 1; j + 1 < m; ++j) {
            inc_v[j] = !inc_v[j];
            const double v = power_sum(g, nodes_of(inc_h), nodes_of(inc_v), gamma, rho);
            inc_v[j] = !inc_v[j];
            if (v > best_val) {
                best_val = v;
                best_axis = 1;
                best_idx = j;
            }
        }
        if (best_axis < 0) break;
        if (best_axis == 0)
            inc_h[best_idx] = !inc_h[best_idx];
        else
            inc_v[best_idx] = !inc_v[best_idx];
        cur = best_val;
    }
    if (out_h) *out_h = nodes_of(inc_h);
    if (out_v) *out_v = nodes_of(inc_v);
    return cur;
}

inline Dissection nodes_to_dissection(const Dissection& grid, const std::vector<std::size_t>& nodes) {
    std::vector<double> pts;
    pts.reserve(nodes.size());
    for (std::size_t i : nodes) pts.push_back(grid.points[i]);
    return Dissection(std::move(pts));
}

} // namespace detail

/// Mixed (gamma,rho)-variation of a grid surface: supremum (exact), value at
/// the full grids (lower bound), or hill-climbed local maximum (greedy).
inline VariationEstimate mixed_var(const GridSurface& g, double gamma, double rho, Mode mode) {
    detail::check_exponents(gamma, rho);
    VariationEstimate est;
    est.gamma = gamma;
    est.rho = rho;
    est.mode = mode;
    est.rect = Rectangle(Interval(g.grid_h().front(), g.grid_h().back()),
                         Interval(g.grid_v().front(), g.grid_v().back()));
    switch (mode) {
        case Mode::lower: {
            est.value = detail::power_sum(g, detail::full_index_set(g.n()),
                                          detail::full_index_set(g.m()), gamma, rho);
            break;
        }
        case Mode::exact: {
            if (g.n() > max_exact_points || g.m() > max_exact_points)
                throw TooLargeForExactError("exact mode limited to " +
                                            std::to_string(max_exact_points) +
                                            " grid points per axis");
            std::vector<std::size_t> hn, vn;
            est.value = detail::exact_sup(g, gamma, rho, &hn, &vn);
            est.argmax_h = detail::nodes_to_dissection(g.grid_h(), hn);
            est.argmax_v = detail::nodes_to_dissection(g.grid_v(), vn);
            break;
        }
        case Mode::greedy: {
            std::vector<std::size_t> hn, vn;
            est.value = detail::greedy_sup(g, gamma, rho, &hn, &vn);
            est.argmax_h = detail::nodes_to_dissection(g.grid_h(), hn);
            est.argmax_v = detail::nodes_to_dissection(g.grid_v(), vn);
            break;
        }
    }
    return est;
}

inline VariationEstimate mixed_var(const CovarianceModel& m, const Rectangle& r,
                                   const Dissection& grid_h, const Dissection& grid_v,
                                   double gamma, double rho, Mode mode) {
    const double tol = 1e-12 * std::max(1.0, std::abs(r.s.hi) + std::abs(r.u.hi));
    if (std::abs(grid_h.front() - r.s.lo) > tol || std::abs(grid_h.back() - r.s.hi) > tol ||
        std::abs(grid_v.front() - r.u.lo) > tol || std::abs(grid_v.back() - r.u.hi) > tol)
        throw GridMismatchError("mixed_var: grids must span the rectangle");
    auto est = mixed_var(GridSurface::from_model(m, grid_h, grid_v), gamma, rho, mode);
    est.rect = r;
    return est;
}

// ---------------------------------------------------------------------------
// One-sided V+ variants
// ---------------------------------------------------------------------------

/// Inner-interval convention for the one-sided variation: for an outer cell
/// [t'_j, t'_{j+1}] of [s,t], the inner dissection runs over [s,t'_j] (U),
/// [t'_{j+1}, t] (L), [t'_j, t'_{j+1}] (D) or all of [s,t] (square).
enum class Region { square, U, L, D };

inline std::string to_string(Region r) {
    switch (r) {
        case Region::square: return "square";
        case Region::U: return "U";
        case Region::L: return "L";
        case Region::D: return "D";
    }
    return "?";
}

namespace detail {

/// V+ of a square grid surface. Both the outer supremum and the per-strip
/// inner suprema are additive over their cells, so nested max-sum DPs give
/// the exact value in polynomial time.
inline double vplus_value(const GridSurface& g, Region region, double gamma, double rho,
                          Mode mode, std::vector<std::size_t>* out_outer) {
    const std::size_t n = g.n();
    const double exponent = rho / gamma;

    // Supremum of sum |increment|^gamma over dissections of nodes [p..q]
    // against the vertical strip (c,d); for the lower mode the full grid
    // between p and q is used instead.
    const auto inner_value = [&](std::size_t p, std::size_t q, std::size_t c, std::size_t d) {
        if (q <= p) return 0.0;
        const auto w = [&](std::size_t i, std::size_t j) {
            return std::pow(std::abs(g.increment(p + i, p + j, c, d)), gamma);
        };
        if (mode == Mode::lower) {
            double s = 0.0;
            for (std::size_t i = p; i < q; ++i) s += w(i - p, i - p + 1);
            return s;
        }
        return max_partition_sum(q - p + 1, w);
    };

    const auto strip = [&](std::size_t c, std::size_t d) {
        switch (region) {
            case Region::square: return std::pow(inner_value(0, n - 1, c, d), exponent);
            case Region::U: return std::pow(inner_value(0, c, c, d), exponent);
            case Region::L: return std::pow(inner_value(d, n - 1, c, d), exponent);
            case Region::D: return std::pow(inner_value(c, d, c, d), exponent);
        }
        return 0.0;
    };

    if (mode == Mode::lower) {
        double outer = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) outer += strip(j, j + 1);
        if (out_outer) *out_outer = full_index_set(n);
        return std::pow(outer, 1.0 / rho);
    }
    if (mode == Mode::exact) {
        std::vector<std::size_t> parents;
        const double total = max_partition_sum(n, strip, &parents);
        if (out_outer) {
            std::vector<std::size_t> on;
            for (std::size_t j = n - 1;; j = parents[j]) {
                on.push_back(j);
                if (j == 0) break;
            }
            std::reverse(on.begin(), on.end());
            *out_outer = std::move(on);
        }
        return std::pow(total, 1.0 / rho);
    }
    // Greedy: hill-climb the outer dissection, inner suprema stay exact.
    std::vector<bool> inc(n, true);
    const auto outer_value = [&](const std::vector<bool>& flags) {
        double outer = 0.0;
        std::size_t prev = 0;
        for (std::size_t j = 1; j < n; ++j) {
            if (!flags[j]) continue;
            outer += strip(prev, j);
            prev = j;
        }
        return outer;
    };
    double cur = outer_value(inc);
    while (true) {
        double best_val = cur;
        std::size_t best_idx = 0;
        bool found = false;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            inc[j] = !inc[j];
            const double v = outer_value(inc);
            inc[j] = !inc[j];
            if (v > best_val) {
                best_val = v;
                best_idx = j;
                found = true;
            }
        }
        if (!found) break;
        inc[best_idx] = !inc[best_idx];
        cur = best_val;
    }
    if (out_outer) {
        std::vector<std::size_t> on;
        for (std::size_t j = 0; j < n; ++j)
            if (inc[j]) on.push_back(j);
        *out_outer = std::move(on);
    }
    return std::pow(cur, 1.0 / rho);
}

} // namespace detail

/// One-sided variation over the square grid on `interval`.
inline VariationEstimate vplus(const CovarianceModel& m, const Interval& interval, Region region,
                               double gamma, double rho, const Dissection& grid, Mode mode) {
    detail::check_exponents(gamma, rho);
    const double tol = 1e-12 * std::max(1.0, std::abs(interval.hi));
    if (std::abs(grid.front() - interval.lo) > tol || std::abs(grid.back() - interval.hi) > tol)
        throw GridMismatchError("vplus: grid must span the interval");
    if (mode == Mode::exact && grid.size() > max_exact_points)
        throw TooLargeForExactError("vplus exact mode limited to " +
                                    std::to_string(max_exact_points) + " grid points");
    const auto g = GridSurface::from_model(m, grid, grid);
    VariationEstimate est;
    est.gamma = gamma;
    est.rho = rho;
    est.mode = mode;
    est.rect = Rectangle::square(interval);
    std::vector<std::size_t> outer;
    est.value = detail::vplus_value(g, region, gamma, rho, mode, &outer);
    if (mode != Mode::lower) est.argmax_v = detail::nodes_to_dissection(grid, outer);
    return est;
}

/// V+ directly on a grid surface (square grids).
inline double vplus(const GridSurface& g, Region region, double gamma, double rho, Mode mode) {
    detail::check_exponents(gamma, rho);
    return detail::vplus_value(g, region, gamma, rho, mode, nullptr);
}

// ---------------------------------------------------------------------------
// Scaling fits
// ---------------------------------------------------------------------------

/**
 * Least-squares slope of log V_{gamma,rho} against log side length over a
 * family of nested squares, using lower-mode estimates on equispaced grids.
 */
inline RateFit scaling_fit(const CovarianceModel& m, double gamma, double rho,
                           const std::vector<Interval>& squares, std::size_t grid_density) {
    detail::check_exponents(gamma, rho);
    if (squares.size() < 4) throw DegenerateFitError("scaling_fit: need at least 4 squares");
    std::vector<RatePoint> pts;
    for (const auto& sq : squares) {
        const auto grid = Dissection::equispaced(sq, grid_density);
        const auto est = mixed_var(GridSurface::from_model(m, grid, grid), gamma, rho, Mode::lower);
        pts.push_back({sq.length(), est.value, 0.0});
    }
    return loglog_fit(pts);
}

} // namespace gaussrough::var
