#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gaussrough/errors.hpp"
#include "gaussrough/fourier.hpp"

namespace gaussrough::cov {

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi)) throw ConfigError("Interval: lo must not exceed hi");
    }
    double length() const { return hi - lo; }
    bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

/// Axis-aligned rectangle [s.lo,s.hi] x [u.lo,u.hi] in the (s,t)-plane.
struct Rectangle {
    Interval s; // horizontal
    Interval u; // vertical

    Rectangle() = default;
    Rectangle(Interval s_, Interval u_) : s(s_), u(u_) {}
    static Rectangle square(const Interval& i) { return Rectangle(i, i); }

    /// True when the open rectangle does not meet the diagonal {x = y}.
    bool diagonal_disjoint() const { return s.hi <= u.lo || u.hi <= s.lo; }
};

// ---------------------------------------------------------------------------
// Truncation policy for series-defined kinds
// ---------------------------------------------------------------------------

struct TruncationPolicy {
    double tail_tol = 1e-10;
    std::int64_t max_terms = 1 << 21;
};

namespace detail {

/// Memoized evaluation of sum_{k=1}^{terms} c_k cos(k theta). The argument is
/// folded into [0, pi] before lookup; the cache is shared across copies and
/// guarded by a mutex, so concurrent callers see pure, reproducible values.
class CosineSeriesSum {
  public:
    CosineSeriesSum(std::function<double(std::int64_t)> coeff, std::int64_t terms)
        : coeff_(std::move(coeff)), terms_(terms) {}

    double operator()(double theta) const {
        double r = std::fmod(std::abs(theta), fourier::two_pi);
        if (r > std::numbers::pi) r = fourier::two_pi - r;
        const std::uint64_t key = std::bit_cast<std::uint64_t>(r);
        {
            std::lock_guard<std::mutex> lock(mu_);
            const auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        double s = 0.0;
        for (std::int64_t k = 1; k <= terms_; ++k)
            s += coeff_(k) * std::cos(static_cast<double>(k) * r);
        {
            std::lock_guard<std::mutex> lock(mu_);
            memo_.emplace(key, s);
        }
        return s;
    }

    std::int64_t terms() const { return terms_; }

  private:
    std::function<double(std::int64_t)> coeff_;
    std::int64_t terms_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::uint64_t, double> memo_;
};

/// Memoized spectral cosine transform keyed on the lag.
class TransformCache {
  public:
    TransformCache(fourier::SpectralDensity density, double tol)
        : density_(std::move(density)), tol_(tol) {}

    double cov(double x) const {
        const double ax = std::abs(x);
        const std::uint64_t key = std::bit_cast<std::uint64_t>(ax);
        {
            std::lock_guard<std::mutex> lock(mu_);
            const auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        const double v = fourier::spectral_cov(density_, ax, tol_);
        {
            std::lock_guard<std::mutex> lock(mu_);
            memo_.emplace(key, v);
        }
        return v;
    }

    const fourier::SpectralDensity& density() const { return density_; }

  private:
    fourier::SpectralDensity density_;
    double tol_;
    mutable std::mutex mu_;
    mutable std::unordered_map<std::uint64_t, double> memo_;
};

/// Smallest series cutoff whose certified tail stays below tol; throws when
/// the policy cannot reach the tolerance.
inline std::int64_t resolve_cutoff(const fourier::CoefficientSequence& seq,
                                   const TruncationPolicy& policy, double sides = 2.0) {
    const double p = seq.decay_exponent();
    // sides * scale * n^(1-p) / (p-1) <= tol
    const double base = sides * seq.decay_scale() / ((p - 1.0) * policy.tail_tol);
    const double n_needed = std::pow(std::max(base, 1.0), 1.0 / (p - 1.0));
    if (n_needed > static_cast<double>(std::min(seq.kmax(), policy.max_terms))) {
        throw TailNotControlledError(
            "series cutoff cannot certify tail tolerance " + std::to_string(policy.tail_tol) +
            " within " + std::to_string(std::min(seq.kmax(), policy.max_terms)) + " terms");
    }
    return std::max<std::int64_t>(4, static_cast<std::int64_t>(std::ceil(n_needed)));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Model kinds
// ---------------------------------------------------------------------------

struct FbmKind {
    double hurst;
};

struct BrownianBridgeKind {
    double horizon;
};

/// Process with stationary increments pinned at the left end of the domain:
/// the increment variance is F(|t-s|).
struct StationaryFKind {
    std::function<double(double)> variance_of_lag; // F
    double rho_hint = 0.0;                         // 0 = unknown
    std::string label = "stationary-f";
};

struct OuKind {
    double lambda;
};

struct BiFbmKind {
    double hurst;
    double k_exponent;
};

struct RfsKind {
    fourier::CoefficientSequence coeffs; // a_k over Z (k>0: sine, k<0: cosine)
    double zero_mode = 0.0;
    std::shared_ptr<detail::CosineSeriesSum> lag_series;  // (a_k + a_-k)/2 against cos(k(t-s))
    std::shared_ptr<detail::CosineSeriesSum> sum_series;  // (a_-k - a_k)/2 against cos(k(t+s)); null if stationary
};

struct SheDirichletKind {
    double alpha;
    std::shared_ptr<detail::CosineSeriesSum> series; // sum a_k cos(k theta), a_k = 2^(2a-1) k^(-2a)
};

struct ShePeriodicKind {
    double alpha;
    double lambda;
    double color; // gamma of the noise coloring
    double zero_mode = 0.0;
    std::shared_ptr<detail::CosineSeriesSum> series;
};

struct SpectralKind {
    std::shared_ptr<detail::TransformCache> transform;
};

using KindVariant = std::variant<FbmKind, BrownianBridgeKind, StationaryFKind, OuKind, BiFbmKind,
                                 RfsKind, SheDirichletKind, ShePeriodicKind, SpectralKind>;

// ---------------------------------------------------------------------------
// CovarianceModel
// ---------------------------------------------------------------------------

class CovarianceModel {
  public:
    KindVariant kind;
    Interval domain;
    double nominal_rho = 1.0;
    TruncationPolicy trunc;
    std::string name;

    static CovarianceModel fbm(double hurst, Interval domain = {0.0, 1.0}) {
        if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("fbm: H must lie in (0,1)");
        if (domain.lo < 0.0) throw ConfigError("fbm: domain must lie in [0,inf)");
        CovarianceModel m;
        m.kind = FbmKind{hurst};
        m.domain = domain;
        m.nominal_rho = std::max(1.0, 1.0 / (2.0 * hurst));
        m.name = "fbm(H=" + std::to_string(hurst) + ")";
        return m;
    }

    static CovarianceModel brownian_bridge(double horizon) {
        if (!(horizon > 0.0)) throw ConfigError("brownian_bridge: T must be positive");
        CovarianceModel m;
        m.kind = BrownianBridgeKind{horizon};
        m.domain = Interval(0.0, horizon);
        m.nominal_rho = 1.0;
        m.name = "brownian_bridge(T=" + std::to_string(horizon) + ")";
        return m;
    }

    static CovarianceModel stationary_f(std::function<double(double)> variance_of_lag,
                                        Interval domain = {0.0, 1.0}, double rho_hint = 0.0,
                                        std::string label = "stationary-f") {
        if (std::abs(variance_of_lag(0.0)) > 1e-14)
            throw ConfigError("stationary_f: F(0) must vanish");
        CovarianceModel m;
        m.kind = StationaryFKind{std::move(variance_of_lag), rho_hint, label};
        m.domain = domain;
        m.nominal_rho = rho_hint > 0.0 ? rho_hint : 1.0;
        m.name = label;
        return m;
    }

    static CovarianceModel ou(double lambda, Interval domain = {0.0, 1.0}) {
        if (!(lambda > 0.0)) throw ConfigError("ou: lambda must be positive");
        CovarianceModel m;
        m.kind = OuKind{lambda};
        m.domain = domain;
        m.nominal_rho = 1.0;
        m.name = "ou(lambda=" + std::to_string(lambda) + ")";
        return m;
    }

    static CovarianceModel fractional_ou(double hurst, double lambda,
                                         Interval domain = {0.0, 1.0}, double quad_tol = 1e-9) {
        CovarianceModel m;
        m.kind = SpectralKind{std::make_shared<detail::TransformCache>(
            fourier::fractional_ou_density(hurst, lambda), quad_tol)};
        m.domain = domain;
        m.nominal_rho = std::max(1.0, 1.0 / (2.0 * hurst));
        m.name = "fractional_ou(H=" + std::to_string(hurst) + ")";
        return m;
    }

    static CovarianceModel bifbm(double hurst, double k_exponent, Interval domain = {0.0, 1.0}) {
        if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("bifbm: H must lie in (0,1)");
        if (!(k_exponent > 0.0 && k_exponent <= 1.0)) throw ConfigError("bifbm: K must lie in (0,1]");
        if (domain.lo < 0.0) throw ConfigError("bifbm: domain must lie in [0,inf)");
        CovarianceModel m;
        m.kind = BiFbmKind{hurst, k_exponent};
        m.domain = domain;
        m.nominal_rho = std::max(1.0, 1.0 / (2.0 * hurst * k_exponent));
        m.name = "bifbm(H=" + std::to_string(hurst) + ",K=" + std::to_string(k_exponent) + ")";
        return m;
    }

    /// Random Fourier series covariance from squared coefficients a_k (k > 0
    /// weighting sines, k < 0 cosines, k = 0 the constant mode).
    static CovarianceModel rfs(const fourier::CoefficientSequence& coeffs,
                               TruncationPolicy policy = {},
                               Interval domain = {0.0, fourier::two_pi}) {
        CovarianceModel m;
        const std::int64_t cutoff = detail::resolve_cutoff(coeffs, policy);
        RfsKind kind;
        kind.coeffs = coeffs;
        kind.zero_mode = coeffs.at(0);
        kind.lag_series = std::make_shared<detail::CosineSeriesSum>(
            [coeffs](std::int64_t k) { return 0.5 * (coeffs.at(k) + coeffs.at(-k)); }, cutoff);
        bool symmetric = true;
        for (std::int64_t k = 1; k <= cutoff; ++k) {
            if (coeffs.at(k) < 0.0 || coeffs.at(-k) < 0.0)
                throw ConfigError("rfs: squared coefficients must be nonnegative");
            if (coeffs.at(k) != coeffs.at(-k)) symmetric = false;
        }
        if (!symmetric)
            kind.sum_series = std::make_shared<detail::CosineSeriesSum>(
                [coeffs](std::int64_t k) { return 0.5 * (coeffs.at(-k) - coeffs.at(k)); }, cutoff);
        m.kind = std::move(kind);
        m.domain = domain;
        m.nominal_rho = coeffs.decay_rho();
        m.trunc = policy;
        m.name = "rfs";
        return m;
    }

    /// Spatial covariance of the stationary fractional heat field on [0,2*pi]
    /// with Dirichlet conditions: sine modes sin(k x/2), a_k = 2^(2a-1) k^(-2a).
    static CovarianceModel she_dirichlet(double alpha, TruncationPolicy policy = {}) {
        if (!(alpha > 0.5 && alpha <= 1.0)) throw ConfigError("she_dirichlet: alpha in (1/2,1]");
        CovarianceModel m;
        const double scale = std::pow(2.0, 2.0 * alpha - 1.0);
        fourier::CoefficientSequence seq(
            [alpha, scale](std::int64_t k) {
                if (k == 0) return 0.0;
                return scale * std::pow(static_cast<double>(std::llabs(k)), -2.0 * alpha);
            },
            std::numeric_limits<std::int64_t>::max() / 4, 2.0 * alpha, scale);
        const std::int64_t cutoff = detail::resolve_cutoff(seq, policy, /*sides=*/1.0);
        m.kind = SheDirichletKind{
            alpha, std::make_shared<detail::CosineSeriesSum>(
                       [seq](std::int64_t k) { return seq.at(k); }, cutoff)};
        m.domain = Interval(0.0, fourier::two_pi);
        m.nominal_rho = 1.0 / (2.0 * alpha - 1.0);
        m.trunc = policy;
        m.name = "she_dirichlet(alpha=" + std::to_string(alpha) + ")";
        return m;
    }

    /// Spatial covariance of the generalized periodic heat field with spectrum
    /// shift lambda and noise color gamma: a_k = k^(-2 gamma) / (2(lambda + k^(2 alpha))).
    static CovarianceModel she_periodic(double alpha, double lambda, double color,
                                        TruncationPolicy policy = {}) {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("she_periodic: alpha in (0,1]");
        if (!(lambda > 0.0)) throw ConfigError("she_periodic: lambda must be positive");
        if (!(color >= 0.0)) throw ConfigError("she_periodic: gamma must be nonnegative");
        CovarianceModel m;
        fourier::CoefficientSequence seq(
            [alpha, lambda, color](std::int64_t k) -> double {
                if (k == 0) return 1.0 / (2.0 * lambda);
                const double kk = static_cast<double>(std::llabs(k));
                return std::pow(kk, -2.0 * color) / (2.0 * (lambda + std::pow(kk, 2.0 * alpha)));
            },
            std::numeric_limits<std::int64_t>::max() / 4, 2.0 * alpha + 2.0 * color, 0.5);
        const std::int64_t cutoff = detail::resolve_cutoff(seq, policy, /*sides=*/1.0);
        m.kind = ShePeriodicKind{alpha, lambda, color, 1.0 / (2.0 * lambda),
                                 std::make_shared<detail::CosineSeriesSum>(
                                     [seq](std::int64_t k) { return seq.at(k); }, cutoff)};
        m.domain = Interval(0.0, fourier::two_pi);
        m.nominal_rho = std::max(1.0, 1.0 / (2.0 * alpha + 2.0 * color - 1.0));
        m.trunc = policy;
        m.name = "she_periodic(alpha=" + std::to_string(alpha) + ")";
        return m;
    }

    static CovarianceModel spectral(fourier::SpectralDensity density, Interval domain = {0.0, 1.0},
                                    double quad_tol = 1e-9, std::string label = "spectral") {
        density.validate();
        CovarianceModel m;
        const double p = density.decay_exponent;
        m.kind = SpectralKind{std::make_shared<detail::TransformCache>(std::move(density), quad_tol)};
        m.domain = domain;
        m.nominal_rho = std::max(1.0, 1.0 / (p - 1.0));
        m.name = std::move(label);
        return m;
    }
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace detail {

inline void require_in_domain(const CovarianceModel& m, double x) {
    const double slack = 1e-12 * std::max(1.0, std::abs(m.domain.lo) + std::abs(m.domain.hi));
    if (!m.domain.contains(x, slack))
        throw OutOfDomainError("point " + std::to_string(x) + " outside domain of " + m.name);
}

} // namespace detail

inline double eval(const CovarianceModel& m, double s, double t) {
    detail::require_in_domain(m, s);
    detail::require_in_domain(m, t);
    return std::visit(
        [&](const auto& k) -> double {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FbmKind>) {
                const double h2 = 2.0 * k.hurst;
                return 0.5 * (std::pow(std::abs(s), h2) + std::pow(std::abs(t), h2) -
                              std::pow(std::abs(t - s), h2));
            } else if constexpr (std::is_same_v<K, BrownianBridgeKind>) {
                return std::min(s, t) - s * t / k.horizon;
            } else if constexpr (std::is_same_v<K, StationaryFKind>) {
                const double lo = m.domain.lo;
                return 0.5 * (k.variance_of_lag(s - lo) + k.variance_of_lag(t - lo) -
                              k.variance_of_lag(std::abs(t - s)));
            } else if constexpr (std::is_same_v<K, OuKind>) {
                return std::exp(-k.lambda * std::abs(t - s)) / (2.0 * k.lambda);
            } else if constexpr (std::is_same_v<K, BiFbmKind>) {
                const double h2 = 2.0 * k.hurst;
                const double hk2 = 2.0 * k.hurst * k.k_exponent;
                const double base = std::pow(std::abs(s), h2) + std::pow(std::abs(t), h2);
                return std::pow(2.0, -k.k_exponent) *
                       (std::pow(base, k.k_exponent) - std::pow(std::abs(t - s), hk2));
            } else if constexpr (std::is_same_v<K, RfsKind>) {
                double r = 0.25 * k.zero_mode + (*k.lag_series)(t - s);
                if (k.sum_series) r += (*k.sum_series)(t + s);
                return r;
            } else if constexpr (std::is_same_v<K, SheDirichletKind>) {
                return 0.5 * ((*k.series)(0.5 * (t - s)) - (*k.series)(0.5 * (t + s)));
            } else if constexpr (std::is_same_v<K, ShePeriodicKind>) {
                return 0.25 * k.zero_mode + (*k.series)(t - s);
            } else {
                static_assert(std::is_same_v<K, SpectralKind>);
                return k.transform->cov(t - s);
            }
        },
        m.kind);
}

/// Rectangular increment R(s,t; u,v) = R(s,u) - R(s,v) - R(t,u) + R(t,v).
inline double rect_increment(const CovarianceModel& m, const Rectangle& r) {
    return eval(m, r.s.lo, r.u.lo) - eval(m, r.s.lo, r.u.hi) - eval(m, r.s.hi, r.u.lo) +
           eval(m, r.s.hi, r.u.hi);
}

/// Increment variance sigma^2(s,t); equals the rectangular increment over the
/// square [s,t]^2.
inline double sigma2(const CovarianceModel& m, double s, double t) {
    return rect_increment(m, Rectangle(Interval(std::min(s, t), std::max(s, t)),
                                       Interval(std::min(s, t), std::max(s, t))));
}

/**
 * Gram matrix G[i][j] = R(p_i, p_j). A failed Cholesky triggers one ridge
 * retry (1e-12 on the diagonal) to absorb benign floating-point
 * indefiniteness at fine grids; a second failure raises NotPsdError.
 */
inline Eigen::MatrixXd gram(const CovarianceModel& m, const std::vector<double>& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n == 0) throw ConfigError("gram: empty point set");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i] > points[i - 1])) throw ConfigError("gram: points must be sorted strictly");
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = eval(m, points[static_cast<std::size_t>(i)],
                                  points[static_cast<std::size_t>(j)]);
            g(i, j) = v;
            g(j, i) = v;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() == Eigen::Success) return g;
    Eigen::MatrixXd ridged = g + 1e-12 * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt2(ridged);
    if (llt2.info() == Eigen::Success) return ridged;
    throw NotPsdError("gram matrix for " + m.name + " is not positive semidefinite");
}

} // namespace gaussrough::cov
