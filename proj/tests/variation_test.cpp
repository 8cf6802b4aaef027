#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gaussrough/variation.hpp"

using namespace gaussrough;
using cov::CovarianceModel;
using cov::Interval;
using cov::Rectangle;
using var::Dissection;
using var::GridSurface;
using var::Mode;
using var::Region;

namespace {

// Independent oracle: enumerate every pair of sub-dissections directly.
double brute_force_mixed_var(const GridSurface& g, double gamma, double rho) {
    const std::size_t n = g.n(), m = g.m();
    double best = 0.0;
    for (std::uint32_t hm = 0; hm < (1u << (n - 2)); ++hm) {
        std::vector<std::size_t> hn{0};
        for (std::size_t i = 1; i + 1 < n; ++i)
            if (hm & (1u << (i - 1))) hn.push_back(i);
        hn.push_back(n - 1);
        for (std::uint32_t vm = 0; vm < (1u << (m - 2)); ++vm) {
            std::vector<std::size_t> vn{0};
            for (std::size_t j = 1; j + 1 < m; ++j)
                if (vm & (1u << (j - 1))) vn.push_back(j);
            vn.push_back(m - 1);
            double outer = 0.0;
            for (std::size_t j = 0; j + 1 < vn.size(); ++j) {
                double inner = 0.0;
                for (std::size_t i = 0; i + 1 < hn.size(); ++i)
                    inner += std::pow(
                        std::abs(g.increment(hn[i], hn[i + 1], vn[j], vn[j + 1])), gamma);
                outer += std::pow(inner, rho / gamma);
            }
            best = std::max(best, std::pow(outer, 1.0 / rho));
        }
    }
    return best;
}

GridSurface random_symmetric_surface(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> vals(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) vals[i][j] = vals[j][i] = gauss(rng);
    const auto grid = Dissection::equispaced({0.0, 1.0}, n);
    return GridSurface(grid, grid, vals);
}

} // namespace

// ---------------------------------------------------------------------------
// 1D p-variation
// ---------------------------------------------------------------------------

TEST(Pvar1d, HandComputedValues) {
    EXPECT_NEAR(var::pvar_1d({0.0, 1.0, 0.0}, 1.0), 2.0, 1e-15);
    EXPECT_NEAR(var::pvar_1d({0.0, 1.0, 0.0}, 2.0), std::sqrt(2.0), 1e-15);
}

TEST(Pvar1d, BruteForceOracle) {
    // Exhaustive enumeration over sub-dissections of small sample vectors.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(7);
        for (auto& v : x) v = gauss(rng);
        const double p = 1.0 + 2.0 * (trial % 5) / 4.0;
        double best = 0.0;
        const std::size_t n = x.size();
        for (std::uint32_t mask = 0; mask < (1u << (n - 2)); ++mask) {
            std::vector<double> sub{x.front()};
            for (std::size_t i = 1; i + 1 < n; ++i)
                if (mask & (1u << (i - 1))) sub.push_back(x[i]);
            sub.push_back(x.back());
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < sub.size(); ++i)
                s += std::pow(std::abs(sub[i + 1] - sub[i]), p);
            best = std::max(best, std::pow(s, 1.0 / p));
        }
        EXPECT_NEAR(var::pvar_1d(x, p), best, 1e-12);
    }
}

TEST(Pvar1d, MonotoneTotalRise) {
    EXPECT_NEAR(var::pvar_1d({0.0, 0.5, 0.7, 2.0}, 1.0), 2.0, 1e-15);
}

TEST(Pvar1d, RejectsBadExponent) {
    EXPECT_THROW(var::pvar_1d({0.0, 1.0}, 0.5), BadExponentError);
}

// ---------------------------------------------------------------------------
// Mixed variation: exact / lower / greedy
// ---------------------------------------------------------------------------

TEST(MixedVar, BrownianUnitSquareIsOne) {
    const auto m = CovarianceModel::fbm(0.5);
    for (std::size_t n : {std::size_t{2}, std::size_t{5}, std::size_t{9}, std::size_t{12}}) {
        const auto grid = Dissection::equispaced({0.0, 1.0}, n);
        const auto est = var::mixed_var(m, Rectangle::square({0.0, 1.0}), grid, grid, 1.0, 1.0,
                                        Mode::exact);
        EXPECT_NEAR(est.value, 1.0, 1e-12);
    }
}

TEST(MixedVar, ExactMatchesBruteForce) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> expo(1.0, 3.0);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = random_symmetric_surface(6, rng);
        const double gamma = expo(rng), rho = expo(rng);
        const auto est = var::mixed_var(g, gamma, rho, Mode::exact);
        EXPECT_NEAR(est.value, brute_force_mixed_var(g, gamma, rho), 1e-11);
    }
}

TEST(MixedVar, ModeOrdering) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> expo(1.0, 2.5);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_symmetric_surface(7, rng);
        const double gamma = expo(rng), rho = expo(rng);
        const double exact = var::mixed_var(g, gamma, rho, Mode::exact).value;
        const double greedy = var::mixed_var(g, gamma, rho, Mode::greedy).value;
        const double lower = var::mixed_var(g, gamma, rho, Mode::lower).value;
        EXPECT_GE(exact, greedy - 1e-12);
        EXPECT_GE(greedy, lower - 1e-12);
    }
}

TEST(MixedVar, ExponentOrderingInvariant) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> expo(1.0, 3.0);
    int violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_symmetric_surface(6, rng);
        const double gamma = expo(rng), rho = expo(rng);
        const double lo =
            var::mixed_var(g, std::max(gamma, rho), std::max(gamma, rho), Mode::exact).value;
        const double mid = var::mixed_var(g, gamma, rho, Mode::exact).value;
        const double hi =
            var::mixed_var(g, std::min(gamma, rho), std::min(gamma, rho), Mode::exact).value;
        if (!(lo <= mid + 1e-10 && mid <= hi + 1e-10)) ++violations;
    }
    EXPECT_EQ(violations, 0);
}

TEST(MixedVar, TriangleInequalityInModelArgument) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> expo(1.0, 2.5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g1 = random_symmetric_surface(5, rng);
        const auto g2 = random_symmetric_surface(5, rng);
        const double gamma = expo(rng), rho = expo(rng);
        const double sum = var::mixed_var(g1 + g2, gamma, rho, Mode::exact).value;
        const double parts = var::mixed_var(g1, gamma, rho, Mode::exact).value +
                             var::mixed_var(g2, gamma, rho, Mode::exact).value;
        EXPECT_LE(sum, parts + 1e-10);
    }
}

TEST(MixedVar, MonotoneUnderRectangleEnlargement) {
    const auto m = CovarianceModel::fbm(0.3);
    const auto small_grid = Dissection::equispaced({0.2, 0.7}, 7);
    const double small_v = var::mixed_var(m, Rectangle::square({0.2, 0.7}), small_grid, small_grid,
                                          1.0, 5.0 / 3.0, Mode::exact)
                               .value;
    // Any enlarged grid containing the small one only adds candidate
    // dissections, so the supremum cannot drop.
    std::vector<double> merged = small_grid.points;
    merged.insert(merged.begin(), 0.0);
    merged.push_back(0.85);
    merged.push_back(1.0);
    const Dissection merged_grid(merged);
    const double big_v = var::mixed_var(m, Rectangle::square({0.0, 1.0}), merged_grid, merged_grid,
                                        1.0, 5.0 / 3.0, Mode::exact)
                             .value;
    EXPECT_GE(big_v, small_v - 1e-10);
}

TEST(MixedVar, FullGridAttainsSupAtExponentOne) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_symmetric_surface(8, rng);
        const double exact = var::mixed_var(g, 1.0, 1.0, Mode::exact).value;
        const double lower = var::mixed_var(g, 1.0, 1.0, Mode::lower).value;
        EXPECT_NEAR(exact, lower, 1e-10);
    }
}

TEST(MixedVar, ExactRefusesLargeGrids) {
    const auto m = CovarianceModel::fbm(0.5);
    const auto grid = Dissection::equispaced({0.0, 1.0}, 13);
    EXPECT_THROW(
        var::mixed_var(m, Rectangle::square({0.0, 1.0}), grid, grid, 1.0, 1.0, Mode::exact),
        TooLargeForExactError);
}

TEST(MixedVar, RejectsBadExponents) {
    std::mt19937_64 rng(19);
    const auto g = random_symmetric_surface(4, rng);
    EXPECT_THROW(var::mixed_var(g, 0.5, 1.0, Mode::lower), BadExponentError);
    EXPECT_THROW(var::mixed_var(g, 1.0, 0.9, Mode::lower), BadExponentError);
}

TEST(MixedVar, ExactLowerGapForRoughFbm) {
    const auto m = CovarianceModel::fbm(0.3);
    const auto grid = Dissection::equispaced({0.0, 1.0}, 9);
    const auto exact =
        var::mixed_var(m, Rectangle::square({0.0, 1.0}), grid, grid, 1.0, 1.0 / 0.6, Mode::exact);
    const auto lower =
        var::mixed_var(m, Rectangle::square({0.0, 1.0}), grid, grid, 1.0, 1.0 / 0.6, Mode::lower);
    EXPECT_GE(exact.value, lower.value - 1e-12);
    const auto g = GridSurface::from_model(m, grid, grid);
    EXPECT_NEAR(exact.value, brute_force_mixed_var(g, 1.0, 1.0 / 0.6), 1e-11);
}

TEST(MixedVar, ArgmaxReproducesValue) {
    std::mt19937_64 rng(37);
    const auto g = random_symmetric_surface(7, rng);
    const auto est = var::mixed_var(g, 1.4, 1.9, Mode::exact);
    // Recompute the double power sum at the reported argmax dissections.
    const auto& hx = est.argmax_h.points;
    const auto& vx = est.argmax_v.points;
    const auto& grid = Dissection::equispaced({0.0, 1.0}, 7);
    const auto idx = [&](double p) {
        for (std::size_t i = 0; i < grid.size(); ++i)
            if (grid.points[i] == p) return i;
        ADD_FAILURE() << "argmax point not on grid";
        return std::size_t{0};
    };
    double outer = 0.0;
    for (std::size_t j = 0; j + 1 < vx.size(); ++j) {
        double inner = 0.0;
        for (std::size_t i = 0; i + 1 < hx.size(); ++i)
            inner += std::pow(std::abs(g.increment(idx(hx[i]), idx(hx[i + 1]), idx(vx[j]),
                                                   idx(vx[j + 1]))),
                              1.4);
        outer += std::pow(inner, 1.9 / 1.4);
    }
    EXPECT_NEAR(std::pow(outer, 1.0 / 1.9), est.value, 1e-12);
}

// ---------------------------------------------------------------------------
// One-sided variants
// ---------------------------------------------------------------------------

TEST(Vplus, SquareRegionAtExponentOneEqualsV1) {
    const auto m = CovarianceModel::fbm(0.5);
    const auto grid = Dissection::equispaced({0.0, 1.0}, 9);
    const auto v = var::vplus(m, {0.0, 1.0}, Region::square, 1.0, 1.0, grid, Mode::exact);
    EXPECT_NEAR(v.value, 1.0, 1e-12);

    const auto rough = CovarianceModel::fbm(0.35);
    const auto v1 =
        var::mixed_var(rough, Rectangle::square({0.0, 1.0}), grid, grid, 1.0, 1.0, Mode::exact);
    const auto vp = var::vplus(rough, {0.0, 1.0}, Region::square, 1.0, 1.0, grid, Mode::exact);
    EXPECT_NEAR(vp.value, v1.value, 1e-11);
}

TEST(Vplus, DominatesMixedVariation) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> expo(1.0, 2.5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_symmetric_surface(6, rng);
        const double gamma = expo(rng), rho = expo(rng);
        const double v = var::mixed_var(g, gamma, rho, Mode::exact).value;
        const double vp = var::vplus(g, Region::square, gamma, rho, Mode::exact);
        EXPECT_LE(v, vp + 1e-10);
    }
}

TEST(Vplus, DiagonalRegionCollapsesToSigma2Sums) {
    // With gamma = 1 and nonnegative near-diagonal increments the inner sums
    // telescope to the increment variance of each outer cell.
    const auto m = CovarianceModel::fbm(0.3);
    const auto grid = Dissection::equispaced({0.0, 1.0}, 8);
    const double rho = 5.0 / 3.0;
    const auto vd = var::vplus(m, {0.0, 1.0}, Region::D, 1.0, rho, grid, Mode::lower);
    double expected = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j)
        expected += std::pow(cov::sigma2(m, grid.points[j], grid.points[j + 1]), rho);
    expected = std::pow(expected, 1.0 / rho);
    EXPECT_NEAR(vd.value, expected, 1e-12);
}

TEST(Vplus, ConcatenationBound) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> expo(1.0, 2.5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_symmetric_surface(7, rng);
        const double gamma = expo(rng), rho = expo(rng);
        const double sq = var::vplus(g, Region::square, gamma, rho, Mode::exact);
        const double u = var::vplus(g, Region::U, gamma, rho, Mode::exact);
        const double d = var::vplus(g, Region::D, gamma, rho, Mode::exact);
        const double l = var::vplus(g, Region::L, gamma, rho, Mode::exact);
        const double c3 = std::pow(3.0, 1.0 - 1.0 / rho);
        EXPECT_LE(sq, c3 * (u + d + l) + 1e-10);
    }
}

TEST(Vplus, ModeOrdering) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = random_symmetric_surface(7, rng);
        for (Region r : {Region::square, Region::U, Region::L, Region::D}) {
            const double exact = var::vplus(g, r, 1.3, 1.7, Mode::exact);
            const double greedy = var::vplus(g, r, 1.3, 1.7, Mode::greedy);
            const double lower = var::vplus(g, r, 1.3, 1.7, Mode::lower);
            EXPECT_GE(exact, greedy - 1e-12);
            EXPECT_GE(greedy, lower - 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------
// Scaling fits
// ---------------------------------------------------------------------------

TEST(ScalingFit, BrownianSlopeIsOne) {
    const auto m = CovarianceModel::fbm(0.5);
    std::vector<Interval> squares;
    for (int j = 0; j < 6; ++j) squares.push_back({0.0, std::pow(0.5, j)});
    const auto fit = var::scaling_fit(m, 1.0, 1.0, squares, 17);
    EXPECT_NEAR(fit.slope, 1.0, 0.05);
}

TEST(ScalingFit, RoughFbmSlopeMatchesHoelderControl) {
    const auto m = CovarianceModel::fbm(0.3);
    std::vector<Interval> squares;
    for (int j = 0; j < 6; ++j) squares.push_back({0.0, std::pow(0.5, j)});
    const auto fit = var::scaling_fit(m, 1.0, 1.0 / 0.6, squares, 17);
    EXPECT_NEAR(fit.slope, 0.6, 0.1);
}

TEST(ScalingFit, BifbmSlope) {
    const auto m = CovarianceModel::bifbm(0.5, 0.5);
    std::vector<Interval> squares;
    for (int j = 0; j < 6; ++j) squares.push_back({0.0, std::pow(0.5, j)});
    const auto fit = var::scaling_fit(m, 1.0, 2.0, squares, 17);
    EXPECT_NEAR(fit.slope, 0.5, 0.1);
}

TEST(ScalingFit, NeedsFourSquares) {
    const auto m = CovarianceModel::fbm(0.5);
    EXPECT_THROW(var::scaling_fit(m, 1.0, 1.0, {{0.0, 1.0}, {0.0, 0.5}, {0.0, 0.25}}, 9),
                 DegenerateFitError);
}
