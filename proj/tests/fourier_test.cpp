#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gaussrough/fourier.hpp"
#include "gaussrough/variation.hpp"

using namespace gaussrough;
using fourier::CoefficientSequence;
using fourier::TVCase;

namespace {

CoefficientSequence power(double exponent, std::int64_t kmax = 1'000'000) {
    return CoefficientSequence::power_law(exponent, kmax);
}

} // namespace

// ---------------------------------------------------------------------------
// Series evaluation and finite differences
// ---------------------------------------------------------------------------

TEST(CosineSeries, DegenerateCases) {
    CoefficientSequence zero([](std::int64_t) { return 0.0; }, 100, 2.0);
    EXPECT_DOUBLE_EQ(fourier::cosine_eval(zero, 1.3, 50), 0.0);

    CoefficientSequence constant([](std::int64_t k) { return k == 0 ? 2.0 : 0.0; }, 100, 2.0);
    for (double t : {0.0, 0.7, 3.0}) EXPECT_DOUBLE_EQ(fourier::cosine_eval(constant, t, 50), 1.0);
}

TEST(CosineSeries, BaselValueAtZero) {
    const auto a = power(2.0);
    // K(0) - a_0/2 = sum 1/k^2 -> pi^2/6; the partial-sum tail is ~1/N.
    const double v = fourier::cosine_eval(a, 0.0, 100000);
    EXPECT_NEAR(v, std::numbers::pi * std::numbers::pi / 6.0, 2e-5);
}

TEST(Diff2Weighted, InverseSquareIsFlat) {
    const auto a = power(2.0);
    for (std::int64_t k : {1, 5, 100, 10000})
        EXPECT_NEAR(fourier::diff2_weighted(a, k).d2_weighted, 0.0, 1e-12);
}

TEST(Diff2Weighted, SubquadraticWeightIsConcave) {
    const auto a = power(1.8);
    for (std::int64_t k = 1; k < 1'000'000; k = k * 3 + 1)
        EXPECT_LE(fourier::diff2_weighted(a, k).d2_weighted, 0.0) << k;
}

TEST(Diff2Weighted, CubeWeightedSecondDifferenceVanishes) {
    // k^3 |D2 a_k| for a_k = k^-3 behaves like 12/k^2: strictly decreasing.
    const auto a = power(3.0);
    double prev = std::numeric_limits<double>::infinity();
    for (std::int64_t k = 2; k <= 100000; k *= 2) {
        const double v = std::pow(static_cast<double>(k), 3.0) *
                         std::abs(fourier::diff2_weighted(a, k).d2);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_LT(prev, 1e-8);
}

// ---------------------------------------------------------------------------
// Convexity verdicts
// ---------------------------------------------------------------------------

TEST(ConvexityCheck, PowerLawFamilies) {
    for (double alpha : {0.6, 0.75, 0.9, 1.0}) {
        const auto v = fourier::convexity_check(power(2.0 * alpha, 100000), 100000);
        EXPECT_TRUE(v.weighted_concave) << alpha;
        EXPECT_TRUE(v.decay_vanishes) << alpha;
        EXPECT_TRUE(v.sampled_convex) << alpha << " min d2 " << v.min_second_difference;
        EXPECT_TRUE(v.sampled_nonincreasing) << alpha;
        EXPECT_TRUE(v.pass()) << alpha;
    }
}

TEST(ConvexityCheck, AlternatingSignsFail) {
    CoefficientSequence alt(
        [](std::int64_t k) {
            if (k == 0) return 0.0;
            const double kk = static_cast<double>(std::llabs(k));
            return (std::llabs(k) % 2 == 0 ? 1.0 : -1.0) / (kk * kk);
        },
        100000, 2.0);
    const auto v = fourier::convexity_check(alt, 10000);
    EXPECT_FALSE(v.weighted_concave);
    EXPECT_FALSE(v.pass());
}

TEST(ConvexityCheck, InverseSquareClosedForm) {
    // The limit is a quadratic polynomial on [0,2*pi]; everything passes.
    const auto v = fourier::convexity_check(power(2.0, 200000), 200000);
    EXPECT_TRUE(v.pass());
}

// ---------------------------------------------------------------------------
// Total-variation bounds
// ---------------------------------------------------------------------------

TEST(TvBound, ConstantSequenceIsPureMass) {
    const auto tv = fourier::tv_bound([](std::int64_t) { return 1.0; }, TVCase::l1, 100000);
    EXPECT_NEAR(tv.limit_b, 1.0, 1e-12);
    EXPECT_NEAR(tv.bound, 1.0, 1e-12);
}

TEST(TvBound, QuasiConvexHarmonicSequence) {
    // sum_(k>=1) (k+1)|D2 (1/k)| = sum 2/(k(k+2)) = 3/2, tail ~ 2/kmax.
    const auto tv = fourier::tv_bound(
        [](std::int64_t k) { return k == 0 ? 1.0 : 1.0 / static_cast<double>(k); },
        TVCase::quasi_convex, 2'000'000);
    EXPECT_NEAR(tv.bound, 1.5, 3e-6);
}

TEST(TvBound, MonotoneMajorantGaussianFamilyUniform) {
    for (double tau : {3.0, 1.0, 0.1, 0.01, 1e-4}) {
        const auto tv = fourier::tv_bound(
            [tau](std::int64_t k) {
                const double kk = static_cast<double>(k);
                return std::exp(-kk * kk * tau);
            },
            TVCase::monotone_majorant, 4'000'000);
        EXPECT_NEAR(tv.bound, 2.0, 1e-9) << tau;
    }
}

TEST(TvBound, DivergentSeriesDetected) {
    EXPECT_THROW(
        fourier::tv_bound([](std::int64_t k) { return std::exp(0.3 * k); }, TVCase::l1, 100000),
        DivergesError);
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

TEST(Kernels, DirichletAtZeroAndDirectSum) {
    EXPECT_DOUBLE_EQ(fourier::dirichlet(7, 0.0), 15.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, fourier::two_pi - 0.05);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = u(rng);
        const std::int64_t n = 1 + trial % 20;
        double direct = 1.0;
        for (std::int64_t k = 1; k <= n; ++k) direct += 2.0 * std::cos(k * t);
        EXPECT_NEAR(fourier::dirichlet(n, t), direct, 1e-10);
    }
}

TEST(Kernels, FejerDiscreteIsCesaroSumOfDirichlet) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, fourier::two_pi - 0.05);
    for (int trial = 0; trial < 50; ++trial) {
        const double t = u(rng);
        const std::int64_t n = trial % 15;
        double direct = 0.0;
        for (std::int64_t k = 0; k <= n; ++k) direct += fourier::dirichlet(k, t);
        EXPECT_NEAR(fourier::fejer_discrete(n, t), direct, 1e-9);
        EXPECT_GE(fourier::fejer_discrete(n, t), -1e-12);
    }
    EXPECT_DOUBLE_EQ(fourier::fejer_discrete(4, 0.0), 25.0);
}

TEST(Kernels, ContinuousFejer) {
    for (double xi : {0.5, 1.0, 7.0}) {
        EXPECT_DOUBLE_EQ(fourier::fejer_cont(xi, 0.0), 0.5 * xi * xi);
        for (double x : {0.3, 2.0, -1.5}) {
            EXPECT_GE(fourier::fejer_cont(xi, x), 0.0);
            EXPECT_NEAR(fourier::fejer_cont(xi, x), (1.0 - std::cos(xi * x)) / (x * x), 1e-9);
        }
        EXPECT_NEAR(fourier::fejer_cont(xi, 1e-7), 0.5 * xi * xi, 1e-4 * xi * xi);
    }
}

TEST(Kernels, AbelSummationIdentity) {
    // S_n(t) = 1/2 sum_{k<n} (a_k - a_{k+1}) D_k(t) + 1/2 a_n D_n(t).
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, fourier::two_pi - 0.05);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 3 + trial % 12;
        std::vector<double> a(static_cast<std::size_t>(n) + 1);
        for (auto& v : a) v = gauss(rng);
        const double t = u(rng);
        double direct = 0.5 * a[0];
        for (int k = 1; k <= n; ++k) direct += a[static_cast<std::size_t>(k)] * std::cos(k * t);
        double abel = 0.5 * a[static_cast<std::size_t>(n)] * fourier::dirichlet(n, t);
        for (int k = 0; k < n; ++k)
            abel += 0.5 * (a[static_cast<std::size_t>(k)] - a[static_cast<std::size_t>(k) + 1]) *
                    fourier::dirichlet(k, t);
        EXPECT_NEAR(direct, abel, 1e-10);
    }
}

// ---------------------------------------------------------------------------
// Spectral densities
// ---------------------------------------------------------------------------

TEST(Spectral, BoxDensityClosedForm) {
    fourier::SpectralDensity box;
    box.f = [](double) { return 0.5; };
    box.support_cutoff = 1.0;
    for (double x : {0.1, 0.5, 1.0, 3.0})
        EXPECT_NEAR(fourier::spectral_cov(box, x, 1e-10), std::sin(x) / x, 1e-9);
    EXPECT_NEAR(fourier::spectral_cov(box, 0.0, 1e-10), 1.0, 1e-10);
}

TEST(Spectral, FractionalOuIncrementVarianceScaling) {
    const auto sd = fourier::fractional_ou_density(0.4, 1.0);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int j = 4; j <= 10; ++j) {
        const double t = std::pow(2.0, -j);
        const double ratio = fourier::spectral_sigma2(sd, t, 1e-9) / std::pow(t, 0.8);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 1.5); // bounded above and below across the dyadic range
}

TEST(Spectral, WholeLineHeatVarianceSlope) {
    const auto sd = fourier::whole_line_heat_density(0.9, 1.0);
    std::vector<RatePoint> pts;
    for (int j = 3; j <= 9; ++j) {
        const double t = std::pow(2.0, -j);
        pts.push_back({t, fourier::spectral_sigma2(sd, t, 1e-9), 0.0});
    }
    const auto fit = loglog_fit(pts);
    EXPECT_NEAR(fit.slope, 0.8, 0.1);
}

TEST(Spectral, SigmaMatchesCovarianceDifference) {
    const auto sd = fourier::fractional_ou_density(0.3, 2.0);
    for (double t : {0.05, 0.2, 0.7}) {
        const double direct = fourier::spectral_sigma2(sd, t, 1e-9);
        const double via_cov = 2.0 * (fourier::spectral_cov(sd, 0.0, 1e-10) -
                                      fourier::spectral_cov(sd, t, 1e-10));
        EXPECT_NEAR(direct, via_cov, 1e-7);
    }
}

// ---------------------------------------------------------------------------
// Continuous Fejer convexity probe
// ---------------------------------------------------------------------------

TEST(FejerProbe, FractionalOuDetectsConvexWindow) {
    const auto sd = fourier::fractional_ou_density(0.4, 1.0);
    std::vector<double> xs;
    for (double x = 0.05; x <= 0.85; x += 0.1) xs.push_back(x);
    const auto res = fourier::fejer_convexity_probe(sd, xs, 4096.0, 1e-4);
    EXPECT_TRUE(res.convex_near_zero);
    EXPECT_GT(res.x0, 0.0);
}

TEST(FejerProbe, WholeLineHeatNonpositiveNearZero) {
    const auto sd = fourier::whole_line_heat_density(0.9, 1.0);
    const std::vector<double> xs{0.05, 0.1, 0.2};
    const auto res = fourier::fejer_convexity_probe(sd, xs, 4096.0, 1e-4);
    EXPECT_TRUE(res.convex_near_zero);
    // Cross-check: small-lag second differences of the covariance itself.
    const double h = 0.05;
    const double d2 = fourier::spectral_cov(sd, 2.0 * h, 1e-10) -
                      2.0 * fourier::spectral_cov(sd, h, 1e-10) +
                      fourier::spectral_cov(sd, 0.0, 1e-10);
    EXPECT_GE(d2, -1e-9);
}

TEST(FejerProbe, GaussianDensityIsNotConvexAtZero) {
    fourier::SpectralDensity gd;
    gd.f = [](double xi) { return std::exp(-0.5 * xi * xi) / std::sqrt(2.0 * std::numbers::pi); };
    gd.decay_exponent = 8.0;
    gd.decay_scale = std::exp(-2.0) / std::sqrt(2.0 * std::numbers::pi) * 256.0;
    gd.xi_ref = 2.0;
    const std::vector<double> xs{0.05, 0.1, 0.2};
    const auto res = fourier::fejer_convexity_probe(gd, xs, 512.0, 1e-4);
    EXPECT_FALSE(res.convex_near_zero);
    EXPECT_GT(res.probe_values.front(), 0.0);
}

// ---------------------------------------------------------------------------
// Measured Hoelder exponents
// ---------------------------------------------------------------------------

namespace {

std::vector<double> sample_series(const CoefficientSequence& a, std::int64_t n_terms,
                                  std::size_t n_samples, double dx) {
    std::vector<double> out(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        out[i] = fourier::cosine_eval(a, dx * static_cast<double>(i), n_terms);
    return out;
}

} // namespace

TEST(HolderEstimate, LinearFunctionHasExponentOne) {
    std::vector<double> samples(513);
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i] = 0.3 * static_cast<double>(i);
    EXPECT_NEAR(fourier::holder_estimate(samples, 1.0 / 512.0), 1.0, 1e-9);
}

TEST(HolderEstimate, RecoversSeriesRegularity) {
    // a_k = k^-1.5 -> exponent 1/2; a_k = k^-1.8 -> exponent 0.8.
    const double dx = 1.0 / 512.0;
    const auto s2 = sample_series(power(1.5, 200000), 120000, 513, dx);
    EXPECT_NEAR(fourier::holder_estimate(s2, dx), 0.5, 0.07);
    const auto s125 = sample_series(power(1.8, 200000), 20000, 513, dx);
    EXPECT_NEAR(fourier::holder_estimate(s125, dx), 0.8, 0.07);
}

TEST(HolderEstimate, BoundaryCaseInverseSquare) {
    const double dx = 1.0 / 512.0;
    const auto s = sample_series(power(2.0, 100000), 20000, 513, dx);
    EXPECT_NEAR(fourier::holder_estimate(s, dx), 1.0, 0.1);
}

// ---------------------------------------------------------------------------
// Convolution bound for mixed variation
// ---------------------------------------------------------------------------

TEST(ConvolutionBound, DiscreteMassesOnGrid) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 6;
    const double span = fourier::two_pi * static_cast<double>(n - 1) / static_cast<double>(n);
    const auto grid = var::Dissection::equispaced({0.0, span}, n);
    const double h = grid.points[1] - grid.points[0];

    for (int trial = 0; trial < 200; ++trial) {
        // Random nonnegative cosine polynomial as stationary kernel.
        std::vector<double> c(6);
        for (auto& v : c) v = u(rng);
        const auto kernel = [&](double x) {
            double s = c[0];
            for (std::size_t k = 1; k < c.size(); ++k)
                s += c[k] * std::cos(static_cast<double>(k) * x);
            return s;
        };
        // Signed masses at grid shifts.
        std::vector<double> w(3);
        std::vector<double> shift(3);
        double tv = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = 2.0 * u(rng) - 1.0;
            shift[i] = h * static_cast<double>(i);
            tv += std::abs(w[i]);
        }
        const auto surface_at_shift = [&](double x0) {
            std::vector<std::vector<double>> vals(n, std::vector<double>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    vals[i][j] = kernel(grid.points[i] - x0 - grid.points[j]);
            return var::GridSurface(grid, grid, vals);
        };
        std::vector<std::vector<double>> conv(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t q = 0; q < w.size(); ++q)
                    conv[i][j] += w[q] * kernel(grid.points[i] - shift[q] - grid.points[j]);
        const var::GridSurface conv_surface(grid, grid, conv);

        const double gamma = 1.0 + u(rng);
        const double rho = gamma + u(rng); // the bound needs gamma <= rho
        const double lhs = var::mixed_var(conv_surface, gamma, rho, var::Mode::exact).value;
        double rhs_sup = 0.0;
        for (double x0 : shift)
            rhs_sup = std::max(
                rhs_sup, var::mixed_var(surface_at_shift(x0), gamma, rho, var::Mode::exact).value);
        EXPECT_LE(lhs, tv * rhs_sup + 1e-9);
    }
}
