#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gaussrough/covariance.hpp"
#include "gaussrough/errors.hpp"
#include "gaussrough/gaussian.hpp"
#include "gaussrough/variation.hpp"

namespace gaussrough::criteria {

using cov::CovarianceModel;
using cov::Interval;
using cov::Rectangle;
using var::Dissection;

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class Status { pass, fail, checked_up_to, assumed };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::checked_up_to: return "checked-up-to";
        case Status::assumed: return "assumed";
    }
    return "?";
}

struct Verdict {
    Status status = Status::fail;
    double evidence = 0.0;
    std::string note;
};

struct ConditionReport {
    std::string model;
    double rho_used = 0.0;
    double jm_constant = 0.0;
    double h_detected = 0.0;
    double mu_plus = 0.0;
    double mu_minus = 0.0;
    std::vector<std::pair<std::string, Verdict>> verdicts;

    void add(std::string name, Verdict v) { verdicts.emplace_back(std::move(name), std::move(v)); }
    const Verdict* find(const std::string& name) const {
        for (const auto& [k, v] : verdicts)
            if (k == name) return &v;
        return nullptr;
    }
    bool passed(const std::string& name) const {
        const Verdict* v = find(name);
        return v && (v->status == Status::pass || v->status == Status::checked_up_to);
    }
};

// ---------------------------------------------------------------------------
// On-diagonal variation control
// ---------------------------------------------------------------------------

struct JmCheck {
    double constant = 0.0; // max sigma^2(s,t) / (t-s)^(1/rho) at the finest grid
    bool pass = false;
    std::vector<double> per_refinement;
};

/// Checks sigma^2(s,t) <= C (t-s)^(1/rho) with the Hoelder control
/// omega(s,t) = C (t-s): C is maximized over grid pairs and must stay stable
/// under two dyadic grid refinements.
inline JmCheck jm_check(const CovarianceModel& m, double rho, const Dissection& grid) {
    if (rho < 1.0) throw BadExponentError("jm_check: rho must be >= 1");
    JmCheck out;
    Dissection g = grid;
    for (int level = 0; level < 3; ++level) {
        double c = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = i + 1; j < g.size(); ++j) {
                const double gap = g.points[j] - g.points[i];
                c = std::max(c, std::abs(cov::sigma2(m, g.points[i], g.points[j])) /
                                    std::pow(gap, 1.0 / rho));
            }
        out.per_refinement.push_back(c);
        if (level < 2) {
            std::vector<double> refined;
            for (std::size_t i = 0; i + 1 < g.size(); ++i) {
                refined.push_back(g.points[i]);
                refined.push_back(0.5 * (g.points[i] + g.points[i + 1]));
            }
            refined.push_back(g.points.back());
            g = Dissection(std::move(refined));
        }
    }
    out.constant = out.per_refinement.back();
    out.pass = std::isfinite(out.constant);
    for (std::size_t r = 1; r < out.per_refinement.size(); ++r) {
        if (out.per_refinement[r] > out.per_refinement[r - 1] * 1.1) out.pass = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Near-diagonal sign condition
// ---------------------------------------------------------------------------

/// Largest window width h such that every grid rectangle [s,t] x [u,v] with
/// [u,v] inside [s,t] and t - s <= h has nonnegative increment (within
/// 1e-10). Scans all nested grid rectangles once.
inline double sign_check_b2(const CovarianceModel& m, const Dissection& grid,
                            const std::vector<double>& h_candidates) {
    const auto& p = grid.points;
    const std::size_t n = p.size();
    double min_bad_width = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double width = p[j] - p[i];
            if (width >= min_bad_width) continue;
            bool bad = false;
            for (std::size_t a = i; a < j && !bad; ++a)
                for (std::size_t b = a + 1; b <= j && !bad; ++b) {
                    const double val = cov::rect_increment(
                        m, Rectangle(Interval(p[i], p[j]), Interval(p[a], p[b])));
                    if (val < -1e-10) bad = true;
                }
            if (bad) min_bad_width = width;
        }
    }
    double detected = 0.0;
    for (double h : h_candidates)
        if (h < min_bad_width) detected = std::max(detected, h);
    if (!std::isfinite(min_bad_width)) detected = grid.back() - grid.front();
    return detected;
}

// ---------------------------------------------------------------------------
// Off-diagonal mass estimates
// ---------------------------------------------------------------------------

struct MassEstimates {
    double mu_plus = 0.0;  // at the finest refinement
    double mu_minus = 0.0;
    std::vector<double> plus_per_refinement;
    std::vector<double> minus_per_refinement;
    bool plus_diverging = false;
    bool minus_diverging = false;
};

/// Sums of positive/negative rectangular increments over strictly
/// off-diagonal grid cells, tracked over three dyadic refinements. A total
/// growth factor above 1.5 across the refinements flags divergence.
inline MassEstimates mass_estimates(const CovarianceModel& m, const Dissection& grid) {
    MassEstimates out;
    Dissection g = grid;
    for (int level = 0; level < 3; ++level) {
        const auto& p = g.points;
        double plus = 0.0, minus = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            for (std::size_t j = 0; j + 1 < p.size(); ++j) {
                if (i == j) continue;
                const double v = cov::rect_increment(
                    m, Rectangle(Interval(p[i], p[i + 1]), Interval(p[j], p[j + 1])));
                if (v > 0.0)
                    plus += v;
                else
                    minus -= v;
            }
        }
        out.plus_per_refinement.push_back(plus);
        out.minus_per_refinement.push_back(minus);
        if (level < 2) {
            std::vector<double> refined;
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                refined.push_back(p[i]);
                refined.push_back(0.5 * (p[i] + p[i + 1]));
            }
            refined.push_back(p.back());
            g = Dissection(std::move(refined));
        }
    }
    out.mu_plus = out.plus_per_refinement.back();
    out.mu_minus = out.minus_per_refinement.back();
    const auto diverging = [](const std::vector<double>& seq) {
        return seq.front() > 0.0 ? seq.back() > 1.5 * seq.front() : seq.back() > 1e-9;
    };
    out.plus_diverging = diverging(out.plus_per_refinement);
    out.minus_diverging = diverging(out.minus_per_refinement);
    return out;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class Route { part_a, part_b };

struct Classification {
    Route route = Route::part_a;
    double rho = 1.0;
    ConditionReport report;
};

/// Catalog routing: models whose variation exponent is 1 go through the
/// finite-measure route (A); rougher models go through the on-diagonal
/// control route (B) with their catalog rho. Numeric evidence (Hoelder
/// control constant, sign window, off-diagonal masses) is attached.
inline Classification classify(const CovarianceModel& m, std::size_t grid_n = 33) {
    double rho = m.nominal_rho;
    if (const auto* st = std::get_if<cov::StationaryFKind>(&m.kind)) {
        if (st->rho_hint <= 0.0)
            throw UnknownKindError("classify: stationary kind needs a rho hint");
        rho = std::max(1.0, st->rho_hint);
    }
    Classification c;
    c.rho = rho;
    c.route = rho > 1.0 ? Route::part_b : Route::part_a;
    c.report.model = m.name;
    c.report.rho_used = rho;

    const auto grid = Dissection::equispaced(m.domain, grid_n);
    const auto jm = jm_check(m, rho, grid);
    c.report.jm_constant = jm.constant;
    c.report.add("jm", Verdict{jm.pass ? Status::pass : Status::fail, jm.constant,
                               "max sigma^2/(t-s)^(1/rho) over dyadic refinements"});

    std::vector<double> h_candidates;
    for (double h = m.domain.length(); h > m.domain.length() / 1024.0; h *= 0.5)
        h_candidates.push_back(h);
    c.report.h_detected = sign_check_b2(m, grid, h_candidates);
    c.report.add("b2_sign", Verdict{c.report.h_detected > 0.0 ? Status::pass : Status::fail,
                                    c.report.h_detected, "nested rectangles at grid n=" +
                                                             std::to_string(grid_n)});

    const auto mass = mass_estimates(m, grid);
    c.report.mu_plus = mass.mu_plus;
    c.report.mu_minus = mass.mu_minus;
    c.report.add("mu_plus_finite", Verdict{mass.plus_diverging ? Status::fail : Status::pass,
                                           mass.mu_plus, "off-diagonal positive mass"});
    c.report.add("mu_minus_finite", Verdict{mass.minus_diverging ? Status::fail : Status::pass,
                                            mass.mu_minus, "off-diagonal negative mass"});
    c.report.add("mu_distribution_continuous",
                 Verdict{Status::assumed, 0.0, "assumed for catalog kinds"});

    const auto cyr = gauss::cyr_exponents(rho);
    c.report.add("cyr", Verdict{cyr.holds ? Status::pass : Status::fail, cyr.q,
                                "q = 1/(1/(2 rho) + 1/2); requires rho < 2"});
    return c;
}

// ---------------------------------------------------------------------------
// Stationary-increment hypothesis suite
// ---------------------------------------------------------------------------

struct ChltReport {
    ConditionReport report;
    double f_prime_left = 0.0; // one-sided derivative of F at the horizon
    bool pass = false;
};

/**
 * For sigma^2(s,t) = F(t-s): checks concavity of F, positivity of the left
 * derivative at the horizon, the conditional-variance lower bound
 * Var(X_{s,t} | outside) >= F'_-(T) (t-s), and nonpositive correlation of
 * disjoint increments.
 */
inline ChltReport chlt_check(const CovarianceModel& m, double horizon, std::size_t grid_n = 64) {
    if (!(horizon > 0.0) || horizon > m.domain.length() + 1e-12)
        throw ConfigError("chlt_check: horizon must fit inside the model domain");
    const double lo = m.domain.lo;

    // Stationarity probe: sigma^2(s, s+tau) must not depend on s.
    double scale = 0.0, worst = 0.0;
    for (int ti = 1; ti <= 8; ++ti) {
        const double tau = horizon * ti / 8.0;
        const double ref = cov::sigma2(m, lo, lo + tau);
        scale = std::max(scale, std::abs(ref));
        for (int si = 0; si <= 8; ++si) {
            const double s = lo + (horizon - tau) * si / 8.0;
            worst = std::max(worst, std::abs(cov::sigma2(m, s, s + tau) - ref));
        }
    }
    if (worst > 1e-8 * std::max(1.0, scale))
        throw NotStationaryError("chlt_check: increment variance depends on the base point (" +
                                 std::to_string(worst) + ")");

    ChltReport out;
    out.report.model = m.name;
    const auto f = [&](double tau) { return cov::sigma2(m, lo, lo + tau); };

    // (i) concavity of F on a dyadically refined grid of lags.
    double min_margin = std::numeric_limits<double>::infinity();
    const int nf = 64;
    for (int i = 1; i + 1 < nf; ++i) {
        const double t0 = horizon * i / nf, t1 = horizon * (i + 1) / nf, t2 = horizon * (i + 2) / nf;
        min_margin = std::min(min_margin, -(f(t2) - 2.0 * f(t1) + f(t0)));
    }
    const bool concave = min_margin >= -1e-9 * std::max(1.0, scale);
    out.report.add("f_concave", Verdict{concave ? Status::pass : Status::fail, min_margin,
                                        "second differences of F at n=64 lags"});

    // (ii) left derivative at the horizon by backward difference; concavity
    // makes backward differences a certified lower bound.
    const double delta = horizon / 1024.0;
    out.f_prime_left = (f(horizon) - f(horizon - delta)) / delta;
    out.report.add("f_prime_left_positive",
                   Verdict{out.f_prime_left > 0.0 ? Status::pass : Status::fail, out.f_prime_left,
                           "backward difference at T, step T/1024"});

    // (iii) conditional variance dominates F'_-(T)(t-s).
    const auto grid = Dissection::equispaced(Interval(lo, lo + horizon), grid_n);
    double min_cond_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double s = grid.points[i], t = grid.points[j];
            const auto cv = gauss::conditional_variance(m, grid, s, t);
            min_cond_margin = std::min(min_cond_margin, cv.value - out.f_prime_left * (t - s));
        }
    }
    out.report.add("conditional_variance_bound",
                   Verdict{min_cond_margin >= -1e-9 ? Status::pass : Status::fail, min_cond_margin,
                           "grid n=" + std::to_string(grid_n)});

    // (iv) disjoint increments nonpositively correlated.
    double max_disjoint = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j)
            for (std::size_t a = j; a < grid.size(); ++a)
                for (std::size_t b = a + 1; b < grid.size(); ++b) {
                    const double v = cov::rect_increment(
                        m, Rectangle(Interval(grid.points[i], grid.points[j]),
                                     Interval(grid.points[a], grid.points[b])));
                    max_disjoint = std::max(max_disjoint, v);
                }
    out.report.add("disjoint_increments_nonpositive",
                   Verdict{max_disjoint <= 1e-10 ? Status::pass : Status::fail, max_disjoint,
                           "off-diagonal rectangles on the grid"});

    out.pass = out.report.passed("f_concave") && out.report.passed("f_prime_left_positive") &&
               out.report.passed("conditional_variance_bound") &&
               out.report.passed("disjoint_increments_nonpositive");
    return out;
}

} // namespace gaussrough::criteria
