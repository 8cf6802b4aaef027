#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "gaussrough/errors.hpp"
#include "gaussrough/fit.hpp"
#include "gaussrough/fourier.hpp"
#include "gaussrough/gaussian.hpp"
#include "gaussrough/parallel.hpp"
#include "gaussrough/rng.hpp"
#include "gaussrough/roughpath.hpp"
#include "gaussrough/variation.hpp"

namespace gaussrough::she {

using gauss::PathEnsemble;
using var::Dissection;

enum class Boundary { dirichlet, periodic, neumann };

inline std::string to_string(Boundary b) {
    switch (b) {
        case Boundary::dirichlet: return "dirichlet";
        case Boundary::periodic: return "periodic";
        case Boundary::neumann: return "neumann";
    }
    return "?";
}

/// Spectral configuration of the fractional stochastic heat field on [0,2*pi].
struct SHEConfig {
    double alpha = 0.9;                 // dissipation exponent, (1/2, 1]
    Boundary bc = Boundary::dirichlet;
    double lambda_shift = 1.0;          // spectrum shift for periodic/neumann
    double noise_color = 0.0;           // gamma of the noise coloring (periodic)
    int d = 2;
    int n_modes = 256;
    Dissection x_grid = Dissection::equispaced({0.0, fourier::two_pi}, 65);
    std::vector<double> t_grid = {0.0};
    std::uint64_t seed = 1;

    void validate() const {
        if (!(alpha > 0.5 && alpha <= 1.0)) throw ConfigError("SHEConfig: alpha in (1/2,1]");
        if (d < 1) throw ConfigError("SHEConfig: d >= 1");
        if (n_modes < 1) throw ConfigError("SHEConfig: n_modes >= 1");
        if (!(lambda_shift > 0.0) && bc != Boundary::dirichlet)
            throw ConfigError("SHEConfig: lambda shift must be positive");
        for (std::size_t i = 1; i < t_grid.size(); ++i)
            if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("SHEConfig: t_grid must increase");
    }

    /// Catalog variation exponent of the spatial covariance.
    double spatial_rho() const {
        if (bc == Boundary::periodic)
            return std::max(1.0, 1.0 / (2.0 * alpha + 2.0 * noise_color - 1.0));
        return 1.0 / (2.0 * alpha - 1.0);
    }
};

// ---------------------------------------------------------------------------
// Mode systems
// ---------------------------------------------------------------------------

/// Flattened spectral decomposition: one row per scalar mode, with amplitude
/// sqrt(a_k), relaxation rate lambda_k, Laplacian eigenvalue tau_k, and the
/// basis values on the spatial grid.
struct ModeSystem {
    std::vector<double> amp;
    std::vector<double> rate;
    std::vector<double> freq2; // tau_k, drives hyper-viscosity corrections
    std::vector<double> basis; // [mode * n_x + x]
    Dissection x_grid;

    std::size_t modes() const { return amp.size(); }
    std::size_t n_x() const { return x_grid.size(); }

    void synth(const std::vector<double>& y, std::size_t upto, double* out) const {
        const std::size_t nx = n_x();
        std::fill(out, out + nx, 0.0);
        for (std::size_t k = 0; k < upto; ++k) {
            const double c = amp[k] * y[k];
            if (c == 0.0) continue;
            const double* row = &basis[k * nx];
            for (std::size_t x = 0; x < nx; ++x) out[x] += c * row[x];
        }
    }
};

/// Number of scalar modes kept by a Galerkin truncation at frequency n.
inline std::size_t modes_for_truncation(const SHEConfig& cfg, int n) {
    switch (cfg.bc) {
        case Boundary::dirichlet: return static_cast<std::size_t>(n);
        case Boundary::periodic: return static_cast<std::size_t>(2 * n + 1);
        case Boundary::neumann: return static_cast<std::size_t>(n + 1);
    }
    return 0;
}

inline ModeSystem build_modes(const SHEConfig& cfg) {
    cfg.validate();
    ModeSystem ms;
    ms.x_grid = cfg.x_grid;
    const std::size_t nx = ms.n_x();
    const auto push = [&](double amp, double rate, double freq2, auto&& fn) {
        ms.amp.push_back(amp);
        ms.rate.push_back(rate);
        ms.freq2.push_back(freq2);
        const std::size_t base = ms.basis.size();
        ms.basis.resize(base + nx);
        for (std::size_t x = 0; x < nx; ++x) ms.basis[base + x] = fn(cfg.x_grid.points[x]);
    };
    switch (cfg.bc) {
        case Boundary::dirichlet: {
            for (int k = 1; k <= cfg.n_modes; ++k) {
                const double tau = 0.25 * k * k;
                const double lam = std::pow(tau, cfg.alpha);
                push(1.0 / std::sqrt(2.0 * lam), lam, tau,
                     [k](double x) { return std::sin(0.5 * k * x); });
            }
            break;
        }
        case Boundary::periodic: {
            const double lam0 = cfg.lambda_shift;
            push(std::sqrt(1.0 / (2.0 * lam0)), lam0, 0.0, [](double) { return 0.5; });
            for (int k = 1; k <= cfg.n_modes; ++k) {
                const double tau = static_cast<double>(k) * k;
                const double lam = cfg.lambda_shift + std::pow(tau, cfg.alpha);
                const double sigma = std::pow(static_cast<double>(k), -2.0 * cfg.noise_color);
                const double amp = std::sqrt(sigma / (2.0 * lam));
                push(amp, lam, tau, [k](double x) { return std::sin(k * x); });
                push(amp, lam, tau, [k](double x) { return std::cos(k * x); });
            }
            break;
        }
        case Boundary::neumann: {
            for (int k = 0; k <= cfg.n_modes; ++k) {
                const double tau = 0.25 * k * k;
                const double lam = cfg.lambda_shift + std::pow(tau, cfg.alpha);
                push(1.0 / std::sqrt(2.0 * lam), lam, tau,
                     [k](double x) { return k == 0 ? 1.0 : std::cos(0.5 * k * x); });
            }
            break;
        }
    }
    return ms;
}

/// Mode system of a plain random Fourier series on [0,2*pi] (static in time).
inline ModeSystem rfs_modes(const fourier::CoefficientSequence& coeffs, int n_modes,
                            const Dissection& x_grid) {
    ModeSystem ms;
    ms.x_grid = x_grid;
    const std::size_t nx = ms.n_x();
    const auto push = [&](double amp, auto&& fn) {
        ms.amp.push_back(amp);
        ms.rate.push_back(1.0);
        ms.freq2.push_back(0.0);
        const std::size_t base = ms.basis.size();
        ms.basis.resize(base + nx);
        for (std::size_t x = 0; x < nx; ++x) ms.basis[base + x] = fn(x_grid.points[x]);
    };
    push(0.5 * std::sqrt(coeffs.at(0)), [](double) { return 1.0; });
    for (int k = 1; k <= n_modes; ++k) {
        push(std::sqrt(coeffs.at(k)), [k](double x) { return std::sin(k * x); });
        push(std::sqrt(coeffs.at(-k)), [k](double x) { return std::cos(k * x); });
    }
    return ms;
}

// ---------------------------------------------------------------------------
// Field synthesis
// ---------------------------------------------------------------------------

/// Stationary spatial slice: every mode weight drawn from the standard
/// normal stationary law.
inline PathEnsemble she_stationary_slice(const SHEConfig& cfg, int paths) {
    const ModeSystem ms = build_modes(cfg);
    PathEnsemble e;
    e.grid = cfg.x_grid;
    e.d = cfg.d;
    e.paths = paths;
    e.seed = cfg.seed;
    e.model = "she_" + to_string(cfg.bc) + "(alpha=" + std::to_string(cfg.alpha) + ")";
    const std::size_t nx = ms.n_x();
    e.data.assign(static_cast<std::size_t>(paths) * nx * static_cast<std::size_t>(cfg.d), 0.0);
    parallel_for(static_cast<std::size_t>(paths) * static_cast<std::size_t>(cfg.d),
                 [&](std::size_t w) {
                     const int p = static_cast<int>(w / static_cast<std::size_t>(cfg.d));
                     const int c = static_cast<int>(w % static_cast<std::size_t>(cfg.d));
                     RngStream stream(cfg.seed, "she-init", w);
                     std::vector<double> y(ms.modes());
                     for (auto& v : y) v = stream.gaussian();
                     std::vector<double> field(nx);
                     ms.synth(y, ms.modes(), field.data());
                     for (std::size_t x = 0; x < nx; ++x) e.at(p, x, c) = field[x];
                 });
    return e;
}

/// Time evolution: exact stationary Ornstein-Uhlenbeck transitions per mode
/// over the configured time grid.
struct SpaceTimeField {
    SHEConfig cfg;
    std::vector<PathEnsemble> slices; // one per t_grid entry
};

inline SpaceTimeField she_evolve(const SHEConfig& cfg, int paths) {
    cfg.validate();
    const ModeSystem ms = build_modes(cfg);
    SpaceTimeField out;
    out.cfg = cfg;
    const std::size_t nx = ms.n_x();
    const std::size_t nt = cfg.t_grid.size();
    out.slices.assign(nt, PathEnsemble{});
    for (std::size_t ti = 0; ti < nt; ++ti) {
        auto& s = out.slices[ti];
        s.grid = cfg.x_grid;
        s.d = cfg.d;
        s.paths = paths;
        s.seed = cfg.seed;
        s.model = "she_" + to_string(cfg.bc) + "@t=" + std::to_string(cfg.t_grid[ti]);
        s.data.assign(static_cast<std::size_t>(paths) * nx * static_cast<std::size_t>(cfg.d), 0.0);
    }
    parallel_for(static_cast<std::size_t>(paths) * static_cast<std::size_t>(cfg.d),
                 [&](std::size_t w) {
                     const int p = static_cast<int>(w / static_cast<std::size_t>(cfg.d));
                     const int c = static_cast<int>(w % static_cast<std::size_t>(cfg.d));
                     RngStream stream(cfg.seed, "she-evolve", w);
                     std::vector<double> y(ms.modes());
                     for (auto& v : y) v = stream.gaussian();
                     std::vector<double> field(nx);
                     for (std::size_t ti = 0; ti < nt; ++ti) {
                         if (ti > 0)
                             gauss::ou_evolve_inplace(ms.rate, y,
                                                      cfg.t_grid[ti] - cfg.t_grid[ti - 1], stream);
                         ms.synth(y, ms.modes(), field.data());
                         for (std::size_t x = 0; x < nx; ++x) out.slices[ti].at(p, x, c) = field[x];
                     }
                 });
    return out;
}

/// Analytic bound sup_x E|Psi(t,x) - Psi(s,x)|^2 <= 2 sum a_k (1 - e^(-lambda_k tau)).
inline double temporal_increment_bound(const SHEConfig& cfg, double tau) {
    const ModeSystem ms = build_modes(cfg);
    double s = 0.0;
    for (std::size_t k = 0; k < ms.modes(); ++k)
        s += ms.amp[k] * ms.amp[k] * (1.0 - std::exp(-ms.rate[k] * tau));
    return 2.0 * s;
}

/// Signature lift of one path of a spatial slice.
inline rp::RoughPathRecord she_lift(const PathEnsemble& e, int path, int level) {
    std::vector<std::vector<double>> values(e.grid.size(), std::vector<double>(e.d));
    for (std::size_t x = 0; x < e.grid.size(); ++x)
        for (int c = 0; c < e.d; ++c) values[x][static_cast<std::size_t>(c)] = e.at(path, x, c);
    return rp::signature(e.grid.points, values, level);
}

// ---------------------------------------------------------------------------
// Rate experiments
// ---------------------------------------------------------------------------

namespace detail {

inline int lift_level(double beta, int cap = 3) {
    const int by_beta = static_cast<int>(std::floor(1.0 / beta));
    return std::max(2, std::min(cap, by_beta));
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

/// L^q mean with a delta-method standard error.
inline MeanSe lq_mean(const std::vector<double>& draws, double q) {
    MeanSe out;
    const double n = static_cast<double>(draws.size());
    double m = 0.0;
    for (double v : draws) m += std::pow(v, q);
    m /= n;
    double var = 0.0;
    for (double v : draws) {
        const double d = std::pow(v, q) - m;
        var += d * d;
    }
    var /= n * std::max(1.0, n - 1.0);
    out.mean = std::pow(m, 1.0 / q);
    const double se_m = std::sqrt(var);
    out.se = m > 0.0 ? out.mean * se_m / (q * m) : 0.0;
    return out;
}

inline rp::RoughPathRecord lift_values(const Dissection& grid, const std::vector<double>& flat,
                                       int d, int level) {
    std::vector<std::vector<double>> values(grid.size(), std::vector<double>(d));
    for (std::size_t x = 0; x < grid.size(); ++x)
        for (int c = 0; c < d; ++c)
            values[x][static_cast<std::size_t>(c)] = flat[x * static_cast<std::size_t>(d) +
                                                          static_cast<std::size_t>(c)];
    return rp::signature(grid.points, values, level);
}

/// Enforces the 20%-relative-error policy: the worst extreme point may be
/// dropped once, anything further is a noise failure.
inline void enforce_noise_policy(std::vector<RatePoint>& pts, bool drop_largest_x) {
    const auto rel_bad = [](const RatePoint& p) { return p.y > 0.0 && p.se > 0.2 * p.y; };
    if (pts.empty()) return;
    std::sort(pts.begin(), pts.end(),
              [](const RatePoint& a, const RatePoint& b) { return a.x < b.x; });
    const std::size_t extreme = drop_largest_x ? pts.size() - 1 : 0;
    if (rel_bad(pts[extreme])) pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(extreme));
    for (const auto& p : pts)
        if (rel_bad(p))
            throw McNoiseError("rate experiment: relative standard error above 20% at x=" +
                               std::to_string(p.x));
}

} // namespace detail

struct RateExperiment {
    RateFit fit;
    std::vector<RatePoint> points; // x = N, eps or tau; y = measured distance
    int level = 2;
    bool fit_valid = false;
};

namespace detail {

/// d-component synthesis into a flat (x, component) buffer.
inline void synth_components(const ModeSystem& ms, const std::vector<std::vector<double>>& y,
                             std::size_t upto, int d, std::vector<double>& flat,
                             std::vector<double>& scratch) {
    const std::size_t nx = ms.n_x();
    flat.assign(nx * static_cast<std::size_t>(d), 0.0);
    for (int c = 0; c < d; ++c) {
        ms.synth(y[static_cast<std::size_t>(c)], upto, scratch.data());
        for (std::size_t x = 0; x < nx; ++x)
            flat[x * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] = scratch[x];
    }
}

} // namespace detail

/**
 * Coupled Galerkin truncation distances: the truncated field reuses the mode
 * draws of the full one, and E[rho_(beta-Hoel)(Psi, Psi^N)^q]^(1/q) is
 * regressed against N on log-log axes. The fitted slope is negative; its
 * magnitude is the measured rate.
 */
inline RateExperiment galerkin_rate(const SHEConfig& cfg, const std::vector<int>& n_list,
                                    double beta, double q, int mc_paths) {
    cfg.validate();
    const ModeSystem ms = build_modes(cfg);
    const int level = detail::lift_level(beta);
    const std::size_t nx = ms.n_x();

    std::vector<std::vector<double>> draws(n_list.size(), std::vector<double>(mc_paths, 0.0));
    parallel_for(static_cast<std::size_t>(mc_paths), [&](std::size_t p) {
        RngStream stream(cfg.seed, "galerkin", p);
        std::vector<std::vector<double>> y(static_cast<std::size_t>(cfg.d),
                                           std::vector<double>(ms.modes()));
        for (auto& comp : y)
            for (auto& v : comp) v = stream.gaussian();
        std::vector<double> scratch(nx), full_flat, part_flat;
        detail::synth_components(ms, y, ms.modes(), cfg.d, full_flat, scratch);
        const auto lift_full = detail::lift_values(cfg.x_grid, full_flat, cfg.d, level);
        for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
            const std::size_t upto = std::min(ms.modes(), modes_for_truncation(cfg, n_list[ni]));
            detail::synth_components(ms, y, upto, cfg.d, part_flat, scratch);
            const auto lift_part = detail::lift_values(cfg.x_grid, part_flat, cfg.d, level);
            draws[ni][p] = rp::dist_inhomog(lift_full, lift_part, beta);
        }
    });

    RateExperiment out;
    out.level = level;
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        const auto ms_stat = detail::lq_mean(draws[ni], q);
        out.points.push_back({static_cast<double>(n_list[ni]), ms_stat.mean, ms_stat.se});
    }
    auto pts = out.points;
    detail::enforce_noise_policy(pts, /*drop_largest_x=*/true);
    out.fit = loglog_fit(pts);
    out.fit_valid = true;
    return out;
}

/**
 * Hyper-viscosity approximation: modes relax at lambda_k + eps tau_k^theta
 * and stay coupled to the original dynamics with the exact stationary
 * cross-correlation 2 sqrt(lambda lambda_eps) / (lambda + lambda_eps).
 * Distances must trend to zero as eps does.
 */
inline RateExperiment hyperviscosity_rate(const SHEConfig& cfg, double theta,
                                          const std::vector<double>& eps_list, double beta,
                                          double q, int mc_paths) {
    cfg.validate();
    if (!(theta > cfg.alpha)) throw ConfigError("hyperviscosity_rate: need theta > alpha");
    const ModeSystem ms = build_modes(cfg);
    const int level = detail::lift_level(beta);
    const std::size_t nx = ms.n_x();
    const std::size_t nm = ms.modes();

    // Per-eps modified amplitudes and cross-correlations.
    std::vector<std::vector<double>> amp_eps(eps_list.size(), std::vector<double>(nm));
    std::vector<std::vector<double>> corr_eps(eps_list.size(), std::vector<double>(nm));
    for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
        for (std::size_t k = 0; k < nm; ++k) {
            const double lam = ms.rate[k];
            const double lam_eps = lam + eps_list[ei] * std::pow(ms.freq2[k], theta);
            amp_eps[ei][k] = ms.amp[k] * std::sqrt(lam / lam_eps);
            corr_eps[ei][k] = 2.0 * std::sqrt(lam * lam_eps) / (lam + lam_eps);
        }
    }

    std::vector<std::vector<double>> draws(eps_list.size(), std::vector<double>(mc_paths, 0.0));
    parallel_for(static_cast<std::size_t>(mc_paths), [&](std::size_t p) {
        RngStream stream(cfg.seed, "hyperviscosity", p);
        std::vector<std::vector<double>> y(static_cast<std::size_t>(cfg.d),
                                           std::vector<double>(nm));
        std::vector<std::vector<double>> xi(static_cast<std::size_t>(cfg.d),
                                            std::vector<double>(nm));
        for (int c = 0; c < cfg.d; ++c)
            for (std::size_t k = 0; k < nm; ++k) {
                y[static_cast<std::size_t>(c)][k] = stream.gaussian();
                xi[static_cast<std::size_t>(c)][k] = stream.gaussian();
            }
        std::vector<double> scratch(nx), base_flat, pert_flat;
        detail::synth_components(ms, y, nm, cfg.d, base_flat, scratch);
        const auto lift_base = detail::lift_values(cfg.x_grid, base_flat, cfg.d, level);
        ModeSystem pert = ms;
        std::vector<std::vector<double>> y_eps(static_cast<std::size_t>(cfg.d),
                                               std::vector<double>(nm));
        for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
            pert.amp = amp_eps[ei];
            for (int c = 0; c < cfg.d; ++c)
                for (std::size_t k = 0; k < nm; ++k) {
                    const double r = corr_eps[ei][k];
                    y_eps[static_cast<std::size_t>(c)][k] =
                        r * y[static_cast<std::size_t>(c)][k] +
                        std::sqrt(std::max(0.0, 1.0 - r * r)) * xi[static_cast<std::size_t>(c)][k];
                }
            detail::synth_components(pert, y_eps, nm, cfg.d, pert_flat, scratch);
            const auto lift_pert = detail::lift_values(cfg.x_grid, pert_flat, cfg.d, level);
            draws[ei][p] = rp::dist_inhomog(lift_base, lift_pert, beta);
        }
    });

    RateExperiment out;
    out.level = level;
    for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
        const auto ms_stat = detail::lq_mean(draws[ei], q);
        out.points.push_back({eps_list[ei], ms_stat.mean, ms_stat.se});
    }
    auto pts = out.points;
    try {
        detail::enforce_noise_policy(pts, /*drop_largest_x=*/false);
        out.fit = loglog_fit(pts);
        out.fit_valid = true;
    } catch (const DegenerateFitError&) {
        out.fit_valid = false;
    }
    return out;
}

/**
 * Time regularity of the rough-path evolution: E rho_(beta-Hoel) between the
 * stationary slice and its exact OU transition by lag tau, regressed against
 * tau.
 */
inline RateExperiment time_regularity_probe(const SHEConfig& cfg, double beta,
                                            const std::vector<double>& taus, int mc_paths) {
    cfg.validate();
    const ModeSystem ms = build_modes(cfg);
    const int level = detail::lift_level(beta);
    const std::size_t nx = ms.n_x();
    const std::size_t nm = ms.modes();

    std::vector<std::vector<double>> draws(taus.size(), std::vector<double>(mc_paths, 0.0));
    parallel_for(static_cast<std::size_t>(mc_paths), [&](std::size_t p) {
        RngStream stream(cfg.seed, "time-probe", p);
        std::vector<std::vector<double>> y0(static_cast<std::size_t>(cfg.d),
                                            std::vector<double>(nm));
        for (auto& comp : y0)
            for (auto& v : comp) v = stream.gaussian();
        std::vector<double> scratch(nx), flat0, flat1;
        detail::synth_components(ms, y0, nm, cfg.d, flat0, scratch);
        const auto lift0 = detail::lift_values(cfg.x_grid, flat0, cfg.d, level);
        for (std::size_t ti = 0; ti < taus.size(); ++ti) {
            auto y1 = y0;
            for (auto& comp : y1) gauss::ou_evolve_inplace(ms.rate, comp, taus[ti], stream);
            detail::synth_components(ms, y1, nm, cfg.d, flat1, scratch);
            const auto lift1 = detail::lift_values(cfg.x_grid, flat1, cfg.d, level);
            draws[ti][p] = rp::dist_inhomog(lift0, lift1, beta);
        }
    });

    RateExperiment out;
    out.level = level;
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        const auto ms_stat = detail::lq_mean(draws[ti], 1.0);
        out.points.push_back({taus[ti], ms_stat.mean, ms_stat.se});
    }
    auto pts = out.points;
    detail::enforce_noise_policy(pts, /*drop_largest_x=*/false);
    out.fit = loglog_fit(pts);
    out.fit_valid = true;
    return out;
}

/**
 * Second-moment scaling of lift increments: E d(Psi_s, Psi_(s+tau))^2 over a
 * family of dyadic lags, with d the homogeneous norm of the group increment.
 */
inline RateExperiment moment_scaling_rate(const fourier::CoefficientSequence& coeffs, int n_modes,
                                          int d, double base_s, const std::vector<double>& taus,
                                          std::size_t segments, int level, int mc_paths,
                                          std::uint64_t seed) {
    RateExperiment out;
    out.level = level;
    std::vector<std::vector<double>> draws(taus.size(), std::vector<double>(mc_paths, 0.0));
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        const auto grid = Dissection::equispaced({base_s, base_s + taus[ti]}, segments + 1);
        const ModeSystem ms = rfs_modes(coeffs, n_modes, grid);
        const std::size_t nx = ms.n_x();
        const std::size_t nm = ms.modes();
        parallel_for(static_cast<std::size_t>(mc_paths), [&](std::size_t p) {
            RngStream stream(seed, "moment-" + std::to_string(ti), p);
            std::vector<std::vector<double>> y(static_cast<std::size_t>(d),
                                               std::vector<double>(nm));
            for (auto& comp : y)
                for (auto& v : comp) v = stream.gaussian();
            std::vector<double> scratch(nx), flat;
            detail::synth_components(ms, y, nm, d, flat, scratch);
            const auto lift = detail::lift_values(grid, flat, d, level);
            const double dist = rp::hnorm(lift.increment(0, grid.size() - 1));
            draws[ti][p] = dist * dist;
        });
    }
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        const auto ms_stat = detail::lq_mean(draws[ti], 1.0);
        out.points.push_back({taus[ti], ms_stat.mean, ms_stat.se});
    }
    auto pts = out.points;
    detail::enforce_noise_policy(pts, /*drop_largest_x=*/false);
    out.fit = loglog_fit(pts);
    out.fit_valid = true;
    return out;
}

} // namespace gaussrough::she
