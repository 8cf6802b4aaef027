#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gaussrough/covariance.hpp"

using namespace gaussrough;
using cov::CovarianceModel;
using cov::Interval;
using cov::Rectangle;

namespace {

// The structural invariants below (symmetry, additivity, Cauchy-Schwarz,
// nonnegative increment variance) hold for the truncated series exactly, so
// the randomized scans run with a coarse series cutoff.
std::vector<CovarianceModel> catalog_models() {
    cov::TruncationPolicy loose{1e-2, 1 << 21};
    return {
        CovarianceModel::fbm(0.3),
        CovarianceModel::fbm(0.5),
        CovarianceModel::fbm(0.7),
        CovarianceModel::brownian_bridge(1.0),
        CovarianceModel::ou(1.0),
        CovarianceModel::bifbm(0.6, 0.7),
        CovarianceModel::stationary_f([](double x) { return 1.0 - std::exp(-x); }, {0.0, 1.0}, 1.0,
                                      "stationary_f(one_minus_exp)"),
        CovarianceModel::rfs(fourier::CoefficientSequence::power_law(1.8, 1 << 22), loose),
        CovarianceModel::she_dirichlet(0.9, loose),
        CovarianceModel::she_periodic(0.9, 1.0, 0.0, loose),
    };
}

} // namespace

TEST(Covariance, FbmBrownianIsMinKernel) {
    const auto m = CovarianceModel::fbm(0.5);
    EXPECT_NEAR(cov::eval(m, 0.3, 0.7), 0.3, 1e-15);
    EXPECT_NEAR(cov::eval(m, 0.9, 0.2), 0.2, 1e-15);
}

TEST(Covariance, BrownianBridgeDiagonal) {
    const auto m = CovarianceModel::brownian_bridge(1.0);
    EXPECT_NEAR(cov::eval(m, 0.5, 0.5), 0.25, 1e-15);
}

TEST(Covariance, BifbmReducesToFbmAtKOne) {
    const auto bi = CovarianceModel::bifbm(0.5, 1.0);
    const auto fbm = CovarianceModel::fbm(0.5);
    for (int i = 0; i <= 9; ++i)
        for (int j = 0; j <= 9; ++j) {
            const double s = i / 9.0, t = j / 9.0;
            EXPECT_NEAR(cov::eval(bi, s, t), cov::eval(fbm, s, t), 1e-14);
        }
}

TEST(Covariance, BifbmOriginIsFinite) {
    const auto bi = CovarianceModel::bifbm(0.3, 0.5);
    EXPECT_DOUBLE_EQ(cov::eval(bi, 0.0, 0.0), 0.0);
    EXPECT_TRUE(std::isfinite(cov::eval(bi, 0.0, 0.5)));
}

TEST(Covariance, OutOfDomainThrows) {
    const auto m = CovarianceModel::fbm(0.4);
    EXPECT_THROW(cov::eval(m, -0.5, 0.5), OutOfDomainError);
    EXPECT_THROW(cov::eval(m, 0.2, 1.5), OutOfDomainError);
}

TEST(Covariance, BrownianRectIncrements) {
    const auto m = CovarianceModel::fbm(0.5);
    EXPECT_NEAR(cov::rect_increment(m, Rectangle({0.0, 0.5}, {0.5, 1.0})), 0.0, 1e-15);
    EXPECT_NEAR(cov::rect_increment(m, Rectangle({0.2, 0.6}, {0.4, 0.8})), 0.2, 1e-15);
}

TEST(Covariance, SquareIncrementIsSigma2) {
    const auto m = CovarianceModel::fbm(0.3);
    for (double s : {0.1, 0.4}) {
        for (double t : {0.6, 0.9}) {
            const double direct = std::pow(t - s, 0.6);
            EXPECT_NEAR(cov::rect_increment(m, Rectangle({s, t}, {s, t})), direct, 1e-13);
            EXPECT_NEAR(cov::sigma2(m, s, t), direct, 1e-13);
        }
    }
}

TEST(Covariance, Sigma2Examples) {
    EXPECT_NEAR(cov::sigma2(CovarianceModel::fbm(0.25), 0.0, 0.5), std::sqrt(0.5), 1e-12);
    const auto ou_like = CovarianceModel::stationary_f(
        [](double x) { return 1.0 - std::exp(-x); }, {0.0, 1.0}, 1.0, "f");
    EXPECT_NEAR(cov::sigma2(ou_like, 0.0, 1.0), 1.0 - std::exp(-1.0), 1e-12);
}

TEST(Covariance, BifbmQuasiHelixEnvelope) {
    const double h = 0.6, k = 0.7, hk2 = 2.0 * h * k;
    const auto m = CovarianceModel::bifbm(h, k);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        double s = u(rng), t = u(rng);
        if (s == t) continue;
        const double v = cov::sigma2(m, s, t);
        const double gap = std::pow(std::abs(t - s), hk2);
        EXPECT_GE(v, std::pow(2.0, -k) * gap - 1e-12);
        EXPECT_LE(v, std::pow(2.0, 1.0 - k) * gap + 1e-12);
    }
}

TEST(Covariance, SymmetryOnRandomPairs) {
    std::mt19937_64 rng(11);
    for (const auto& m : catalog_models()) {
        std::uniform_real_distribution<double> u(m.domain.lo, m.domain.hi);
        for (int trial = 0; trial < 1000; ++trial) {
            const double s = u(rng), t = u(rng);
            EXPECT_NEAR(cov::eval(m, s, t), cov::eval(m, t, s), 1e-12) << m.name;
        }
    }
}

TEST(Covariance, Sigma2NonnegativeOnRandomPairs) {
    std::mt19937_64 rng(13);
    for (const auto& m : catalog_models()) {
        std::uniform_real_distribution<double> u(m.domain.lo, m.domain.hi);
        for (int trial = 0; trial < 300; ++trial) {
            const double s = u(rng), t = u(rng);
            EXPECT_GE(cov::sigma2(m, s, t), -1e-10) << m.name;
        }
    }
}

TEST(Covariance, RectIncrementAdditivity) {
    std::mt19937_64 rng(17);
    for (const auto& m : catalog_models()) {
        std::uniform_real_distribution<double> u(m.domain.lo, m.domain.hi);
        for (int trial = 0; trial < 40; ++trial) {
            double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
            if (a > b) std::swap(a, b);
            if (c > d) std::swap(c, d);
            if (a == b || c == d) continue;
            const Rectangle whole({a, b}, {c, d});
            const double mid_h = 0.5 * (a + b), mid_v = 0.5 * (c + d);
            double split = 0.0;
            for (const auto& h : {Interval{a, mid_h}, Interval{mid_h, b}})
                for (const auto& v : {Interval{c, mid_v}, Interval{mid_v, d}})
                    split += cov::rect_increment(m, Rectangle(h, v));
            EXPECT_NEAR(cov::rect_increment(m, whole), split, 1e-10) << m.name;
        }
    }
}

TEST(Covariance, CauchySchwarzForCovarianceKinds) {
    std::mt19937_64 rng(19);
    for (const auto& m : catalog_models()) {
        std::uniform_real_distribution<double> u(m.domain.lo, m.domain.hi);
        for (int trial = 0; trial < 100; ++trial) {
            double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
            if (a > b) std::swap(a, b);
            if (c > d) std::swap(c, d);
            if (a == b || c == d) continue;
            const double r = cov::rect_increment(m, Rectangle({a, b}, {c, d}));
            const double bound = std::sqrt(std::max(0.0, cov::sigma2(m, a, b))) *
                                 std::sqrt(std::max(0.0, cov::sigma2(m, c, d)));
            EXPECT_LE(std::abs(r), bound + 1e-10) << m.name;
        }
    }
}

TEST(Covariance, GramSmallBrownianExact) {
    const auto m = CovarianceModel::fbm(0.5);
    const auto g = cov::gram(m, {0.5, 1.0});
    EXPECT_DOUBLE_EQ(g(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(g(0, 1), 0.5);
    EXPECT_DOUBLE_EQ(g(1, 0), 0.5);
    EXPECT_DOUBLE_EQ(g(1, 1), 1.0);
}

TEST(Covariance, GramSinglePoint) {
    const auto m = CovarianceModel::she_dirichlet(0.9, {1e-4, 1 << 21});
    const auto g = cov::gram(m, {1.0});
    EXPECT_NEAR(g(0, 0), cov::eval(m, 1.0, 1.0), 0.0);
}

TEST(Covariance, GramPsdByEigenvalueOracle) {
    const auto m = CovarianceModel::fbm(0.3);
    std::vector<double> pts;
    for (int i = 1; i <= 16; ++i) pts.push_back(i / 16.0);
    const auto g = cov::gram(m, pts);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(Covariance, GramUnsortedPointsRejected) {
    const auto m = CovarianceModel::fbm(0.5);
    EXPECT_THROW(cov::gram(m, {0.5, 0.2}), ConfigError);
}

TEST(Covariance, RfsTailPolicyRejectsImpossibleTolerance) {
    // Slow decay cannot reach 1e-10 within the term budget.
    const auto coeffs = fourier::CoefficientSequence::power_law(1.8, 1 << 22);
    EXPECT_THROW(CovarianceModel::rfs(coeffs, cov::TruncationPolicy{1e-10, 1 << 20}),
                 TailNotControlledError);
}

TEST(Covariance, RfsStationaryDependsOnLagOnly) {
    cov::TruncationPolicy loose{1e-4, 1 << 21};
    const auto m = CovarianceModel::rfs(fourier::CoefficientSequence::power_law(1.8, 1 << 22), loose);
    const double lag = 0.35;
    const double base = cov::eval(m, 1.0, 1.0 + lag);
    for (double s : {0.2, 0.7, 2.0, 4.1})
        EXPECT_NEAR(cov::eval(m, s, s + lag), base, 1e-12);
}

TEST(Covariance, SheDirichletVanishesAtBoundary) {
    const auto m = CovarianceModel::she_dirichlet(0.9, {1e-4, 1 << 21});
    EXPECT_NEAR(cov::eval(m, 0.0, 1.0), 0.0, 1e-12);
    EXPECT_NEAR(cov::eval(m, 0.0, 0.0), 0.0, 1e-12);
}

TEST(Covariance, SpectralMatchesClosedFormBox) {
    fourier::SpectralDensity box;
    box.f = [](double) { return 0.5; };
    box.support_cutoff = 1.0;
    box.decay_exponent = 2.0;
    box.singularity_order = 0.0;
    const auto m = CovarianceModel::spectral(box, {0.0, 4.0}, 1e-10, "box");
    for (double x : {0.25, 0.5, 1.0, 2.5})
        EXPECT_NEAR(cov::eval(m, 0.0, x), std::sin(x) / x, 1e-9);
}

TEST(Covariance, InvalidParametersRejected) {
    EXPECT_THROW(CovarianceModel::fbm(0.0), ConfigError);
    EXPECT_THROW(CovarianceModel::fbm(1.0), ConfigError);
    EXPECT_THROW(CovarianceModel::bifbm(0.5, 1.5), ConfigError);
    EXPECT_THROW(CovarianceModel::she_dirichlet(0.5), ConfigError);
    EXPECT_THROW(CovarianceModel::ou(-1.0), ConfigError);
    EXPECT_THROW(cov::Interval(1.0, 0.0), ConfigError);
}

TEST(Covariance, NominalRhoCatalogRules) {
    EXPECT_DOUBLE_EQ(CovarianceModel::fbm(0.25).nominal_rho, 2.0);
    EXPECT_DOUBLE_EQ(CovarianceModel::fbm(0.75).nominal_rho, 1.0);
    EXPECT_DOUBLE_EQ(CovarianceModel::bifbm(0.6, 0.7).nominal_rho, 1.0 / 0.84);
    EXPECT_DOUBLE_EQ(CovarianceModel::she_dirichlet(0.9, {1e-4, 1 << 21}).nominal_rho, 1.25);
}
