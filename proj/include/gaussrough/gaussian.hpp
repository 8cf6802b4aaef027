#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gaussrough/covariance.hpp"
#include "gaussrough/errors.hpp"
#include "gaussrough/fourier.hpp"
#include "gaussrough/parallel.hpp"
#include "gaussrough/rng.hpp"
#include "gaussrough/variation.hpp"

namespace gaussrough::gauss {

using cov::CovarianceModel;
using cov::Interval;
using cov::Rectangle;
using var::Dissection;

// ---------------------------------------------------------------------------
// Path ensembles
// ---------------------------------------------------------------------------

/// M independent d-component sample paths on a common grid. Regenerating
/// with the same seed reproduces the data bitwise.
struct PathEnsemble {
    Dissection grid;
    int d = 1;
    int paths = 0;
    std::uint64_t seed = 0;
    std::string model;
    std::vector<double> data; // layout: ((path * grid + g) * d + component)

    double& at(int path, std::size_t g, int component) {
        return data[(static_cast<std::size_t>(path) * grid.size() + g) * static_cast<std::size_t>(d) +
                    static_cast<std::size_t>(component)];
    }
    double at(int path, std::size_t g, int component) const {
        return data[(static_cast<std::size_t>(path) * grid.size() + g) * static_cast<std::size_t>(d) +
                    static_cast<std::size_t>(component)];
    }
};

/// Exact Gaussian sampling through a Cholesky factor of the gram matrix.
inline PathEnsemble sample_cholesky(const CovarianceModel& m, const Dissection& grid, int d,
                                    int paths, std::uint64_t seed) {
    const Eigen::MatrixXd g = cov::gram(m, grid.points);
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) {
        llt.compute(g + 1e-12 * Eigen::MatrixXd::Identity(g.rows(), g.cols()));
        if (llt.info() != Eigen::Success)
            throw NotPsdError("sample_cholesky: gram matrix is not positive semidefinite");
    }
    const Eigen::MatrixXd chol = llt.matrixL();

    PathEnsemble e;
    e.grid = grid;
    e.d = d;
    e.paths = paths;
    e.seed = seed;
    e.model = m.name;
    const std::size_t n = grid.size();
    e.data.assign(static_cast<std::size_t>(paths) * n * static_cast<std::size_t>(d), 0.0);

    parallel_for(static_cast<std::size_t>(paths) * static_cast<std::size_t>(d), [&](std::size_t w) {
        const int p = static_cast<int>(w / static_cast<std::size_t>(d));
        const int c = static_cast<int>(w % static_cast<std::size_t>(d));
        RngStream stream(seed, "cholesky", w);
        Eigen::VectorXd z(static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = stream.gaussian();
        const Eigen::VectorXd x = chol * z;
        for (std::size_t gi = 0; gi < n; ++gi)
            e.at(p, gi, c) = x(static_cast<Eigen::Index>(gi));
    });
    return e;
}

/**
 * Direct spectral synthesis of a random Fourier series with independent
 * standard normal mode weights: a_0^(1/2) Y_0 / 2 plus sine modes for k > 0
 * and cosine modes for k < 0, truncated at N.
 */
inline PathEnsemble sample_rfs(const fourier::CoefficientSequence& coeffs, std::int64_t n_modes,
                               const Dissection& grid, int d, int paths, std::uint64_t seed) {
    if (n_modes > coeffs.kmax()) throw ConfigError("sample_rfs: N exceeds kmax");
    const std::size_t n = grid.size();
    const std::size_t nm = static_cast<std::size_t>(n_modes);

    // Basis tables: sin(k t) and cos(k t) per grid point.
    std::vector<double> amp_sin(nm + 1, 0.0), amp_cos(nm + 1, 0.0);
    for (std::size_t k = 1; k <= nm; ++k) {
        const double ak = coeffs.at(static_cast<std::int64_t>(k));
        const double amk = coeffs.at(-static_cast<std::int64_t>(k));
        if (ak < 0.0 || amk < 0.0)
            throw ConfigError("sample_rfs: squared coefficients must be nonnegative");
        amp_sin[k] = std::sqrt(ak);
        amp_cos[k] = std::sqrt(amk);
    }
    const double amp0 = 0.5 * std::sqrt(coeffs.at(0));
    std::vector<double> sin_tab(n * nm), cos_tab(n * nm);
    for (std::size_t gi = 0; gi < n; ++gi) {
        const double t = grid.points[gi];
        for (std::size_t k = 1; k <= nm; ++k) {
            sin_tab[gi * nm + (k - 1)] = std::sin(static_cast<double>(k) * t);
            cos_tab[gi * nm + (k - 1)] = std::cos(static_cast<double>(k) * t);
        }
    }

    PathEnsemble e;
    e.grid = grid;
    e.d = d;
    e.paths = paths;
    e.seed = seed;
    e.model = "rfs";
    e.data.assign(static_cast<std::size_t>(paths) * n * static_cast<std::size_t>(d), 0.0);

    parallel_for(static_cast<std::size_t>(paths) * static_cast<std::size_t>(d), [&](std::size_t w) {
        const int p = static_cast<int>(w / static_cast<std::size_t>(d));
        const int c = static_cast<int>(w % static_cast<std::size_t>(d));
        RngStream stream(seed, "rfs", w);
        const double y0 = stream.gaussian();
        std::vector<double> ysin(nm), ycos(nm);
        for (std::size_t k = 0; k < nm; ++k) {
            ysin[k] = stream.gaussian();
            ycos[k] = stream.gaussian();
        }
        for (std::size_t gi = 0; gi < n; ++gi) {
            double s = amp0 * y0;
            const double* st = &sin_tab[gi * nm];
            const double* ct = &cos_tab[gi * nm];
            for (std::size_t k = 0; k < nm; ++k)
                s += amp_sin[k + 1] * ysin[k] * st[k] + amp_cos[k + 1] * ycos[k] * ct[k];
            e.at(p, gi, c) = s;
        }
    });
    return e;
}

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck transitions
// ---------------------------------------------------------------------------

/// One exact stationary transition Y <- e^(-lambda tau) Y + sqrt(1 - e^(-2 lambda tau)) xi
/// per mode; preserves the unit stationary variance for every step size.
inline void ou_evolve_inplace(const std::vector<double>& lambda, std::vector<double>& y, double tau,
                              RngStream& stream) {
    if (lambda.size() != y.size()) throw DimensionMismatchError("ou_evolve: size mismatch");
    if (tau < 0.0) throw ConfigError("ou_evolve: tau must be nonnegative");
    for (std::size_t k = 0; k < y.size(); ++k) {
        if (!(lambda[k] > 0.0)) throw ConfigError("ou_evolve: lambda must be positive");
        const double decay = std::exp(-lambda[k] * tau);
        const double vol = std::sqrt(std::max(0.0, 1.0 - decay * decay));
        y[k] = decay * y[k] + vol * stream.gaussian();
    }
}

/// Matrix variant: rows are modes, columns independent realizations. Draws
/// are consumed column by column in mode order from the single stream.
inline Eigen::MatrixXd ou_evolve(const std::vector<double>& lambda, const Eigen::MatrixXd& y0,
                                 double tau, RngStream& stream) {
    if (static_cast<std::size_t>(y0.rows()) != lambda.size())
        throw DimensionMismatchError("ou_evolve: row count must match lambda");
    Eigen::MatrixXd out = y0;
    std::vector<double> col(lambda.size());
    for (Eigen::Index c = 0; c < y0.cols(); ++c) {
        for (std::size_t k = 0; k < lambda.size(); ++k) col[k] = y0(static_cast<Eigen::Index>(k), c);
        ou_evolve_inplace(lambda, col, tau, stream);
        for (std::size_t k = 0; k < lambda.size(); ++k) out(static_cast<Eigen::Index>(k), c) = col[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cameron-Martin elements
// ---------------------------------------------------------------------------

/// Finite-span element h(t) = sum_i c_i R(s_i, t) with norm^2 = c' G c.
struct CameronMartinElement {
    std::vector<double> anchors;
    std::vector<double> weights;
    double h_norm = 0.0;
    CovarianceModel model; // kinds share their caches, so the copy is cheap

    double value_at(double t) const {
        double s = 0.0;
        for (std::size_t i = 0; i < anchors.size(); ++i)
            s += weights[i] * cov::eval(model, anchors[i], t);
        return s;
    }

    std::vector<double> path_on(const Dissection& grid) const {
        std::vector<double> h(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) h[i] = value_at(grid.points[i]);
        return h;
    }
};

inline CameronMartinElement cm_element(const CovarianceModel& m, std::vector<double> anchors,
                                       std::vector<double> weights) {
    if (anchors.size() != weights.size())
        throw DimensionMismatchError("cm_element: anchors and weights must match");
    for (double a : anchors) cov::detail::require_in_domain(m, a);
    CameronMartinElement h;
    h.model = m;
    // gram() requires strictly sorted points; sort and merge duplicates.
    std::vector<std::size_t> order(anchors.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return anchors[a] < anchors[b]; });
    for (std::size_t idx : order) {
        if (!h.anchors.empty() && anchors[idx] == h.anchors.back())
            h.weights.back() += weights[idx];
        else {
            h.anchors.push_back(anchors[idx]);
            h.weights.push_back(weights[idx]);
        }
    }
    if (h.anchors.empty()) {
        h.h_norm = 0.0;
        return h;
    }
    const Eigen::MatrixXd g = cov::gram(m, h.anchors);
    Eigen::VectorXd c(static_cast<Eigen::Index>(h.weights.size()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = h.weights[static_cast<std::size_t>(i)];
    h.h_norm = std::sqrt(std::max(0.0, static_cast<double>(c.dot(g * c))));
    return h;
}

// ---------------------------------------------------------------------------
// Discrete variation embedding inequality
// ---------------------------------------------------------------------------

struct EmbeddingCheck {
    double lhs = 0.0;   // (sum_j |h_j|^q)^(1/q) over the dissection cells
    double rhs = 0.0;   // ||h|| * (sum_j (sum_k |R_jk|)^rho)^(1/(2 rho))
    double slack = 0.0; // rhs - lhs; nonnegative up to roundoff
    double q = 0.0;
};

/**
 * Duality bound for increments of a finite-span element against the mixed
 * variation of the increment covariance on a dissection, with
 * q = 1 / (1/(2 rho) + 1/2). The inequality is exact discrete mathematics,
 * so negative slack beyond roundoff indicates a defect.
 */
inline EmbeddingCheck embedding_check(const CovarianceModel& m, double rho, const Dissection& d,
                                      const CameronMartinElement& h) {
    if (rho < 1.0) throw BadExponentError("embedding_check: rho must be >= 1");
    EmbeddingCheck out;
    out.q = 1.0 / (0.5 / rho + 0.5);

    const auto hpath = h.path_on(d);
    const std::size_t cells = d.size() - 1;
    double lhs_sum = 0.0;
    for (std::size_t j = 0; j < cells; ++j)
        lhs_sum += std::pow(std::abs(hpath[j + 1] - hpath[j]), out.q);
    out.lhs = std::pow(lhs_sum, 1.0 / out.q);

    double outer = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
        double row = 0.0;
        for (std::size_t k = 0; k < cells; ++k) {
            row += std::abs(cov::rect_increment(
                m, Rectangle(Interval(d.points[j], d.points[j + 1]),
                             Interval(d.points[k], d.points[k + 1]))));
        }
        outer += std::pow(row, rho);
    }
    out.rhs = h.h_norm * std::pow(outer, 0.5 / rho);
    out.slack = out.rhs - out.lhs;
    return out;
}

/// Complementary Young regularity exponents: sample paths of p-variation for
/// any p > 2 rho pair with q-variation elements iff 1/p + 1/q > 1, which
/// holds exactly when rho < 2.
struct CyrExponents {
    double q = 0.0;
    double p = 0.0;
    bool holds = false;
};

inline CyrExponents cyr_exponents(double rho) {
    CyrExponents c;
    c.q = 1.0 / (0.5 / rho + 0.5);
    c.p = 2.0 * rho * 1.0001;
    c.holds = rho < 2.0 && (1.0 / c.p + 1.0 / c.q > 1.0);
    return c;
}

// ---------------------------------------------------------------------------
// Conditional variance via Schur complement
// ---------------------------------------------------------------------------

struct ConditionalVariance {
    double value = 0.0;
    bool pseudo_inverse_used = false;
};

/**
 * Var(X_t - X_s | grid increments outside [s,t]): Schur complement of the
 * increment covariance matrix. Singular conditioning blocks fall back to an
 * eigenvalue pseudo-inverse and are flagged.
 */
inline ConditionalVariance conditional_variance(const CovarianceModel& m, const Dissection& grid,
                                                double s, double t) {
    const auto& pts = grid.points;
    std::size_t is = pts.size(), it = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i] == s) is = i;
        if (pts[i] == t) it = i;
    }
    if (is >= pts.size() || it >= pts.size() || !(s < t))
        throw ConfigError("conditional_variance: s and t must be grid points with s < t");

    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (i + 1 <= is || i >= it) outside.push_back(i);

    const auto cell = [&](std::size_t i) { return Interval(pts[i], pts[i + 1]); };
    const Interval target(s, t);
    const double v = cov::rect_increment(m, Rectangle(target, target));

    ConditionalVariance out;
    if (outside.empty()) {
        out.value = v;
        return out;
    }
    const auto no = static_cast<Eigen::Index>(outside.size());
    Eigen::MatrixXd co(no, no);
    Eigen::VectorXd b(no);
    for (Eigen::Index a = 0; a < no; ++a) {
        const auto ca = cell(outside[static_cast<std::size_t>(a)]);
        b(a) = cov::rect_increment(m, Rectangle(ca, target));
        for (Eigen::Index c = a; c < no; ++c) {
            const auto cc = cell(outside[static_cast<std::size_t>(c)]);
            const double val = cov::rect_increment(m, Rectangle(ca, cc));
            co(a, c) = val;
            co(c, a) = val;
        }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(co);
    bool ok = ldlt.info() == Eigen::Success;
    Eigen::VectorXd y;
    if (ok) {
        y = ldlt.solve(b);
        const double resid = (co * y - b).norm();
        ok = resid <= 1e-8 * std::max(1.0, b.norm());
    }
    if (!ok) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(co);
        const auto& ev = es.eigenvalues();
        const double cut = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
        Eigen::VectorXd inv = ev;
        for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = ev(i) > cut ? 1.0 / ev(i) : 0.0;
        y = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose() * b;
        out.pseudo_inverse_used = true;
    }
    out.value = v - b.dot(y);
    return out;
}

// ---------------------------------------------------------------------------
// Empirical covariance
// ---------------------------------------------------------------------------

struct EmpiricalCov {
    Eigen::MatrixXd cov;     // grid x grid, pooled over paths and components
    double max_abs_error = 0.0; // against the analytic covariance
};

/// Zero-mean empirical covariance over the ensemble, with the largest
/// absolute deviation from the model covariance on the grid.
inline EmpiricalCov empirical_cov(const PathEnsemble& e, const CovarianceModel& m) {
    if (e.paths < 2) throw ConfigError("empirical_cov: need at least two paths");
    const auto n = static_cast<Eigen::Index>(e.grid.size());
    EmpiricalCov out;
    out.cov = Eigen::MatrixXd::Zero(n, n);
    const double num_samples = static_cast<double>(e.paths) * e.d;
    for (int p = 0; p < e.paths; ++p) {
        for (int c = 0; c < e.d; ++c) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const double xi = e.at(p, static_cast<std::size_t>(i), c);
                for (Eigen::Index j = i; j < n; ++j)
                    out.cov(i, j) += xi * e.at(p, static_cast<std::size_t>(j), c);
            }
        }
    }
    out.cov /= num_samples;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            out.cov(j, i) = out.cov(i, j);
            const double analytic = cov::eval(m, e.grid.points[static_cast<std::size_t>(i)],
                                              e.grid.points[static_cast<std::size_t>(j)]);
            out.max_abs_error = std::max(out.max_abs_error, std::abs(out.cov(i, j) - analytic));
        }
    return out;
}

} // namespace gaussrough::gauss
