#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gaussrough/errors.hpp"
#include "gaussrough/variation.hpp"

namespace gaussrough::rp {

// ---------------------------------------------------------------------------
// Truncated tensor algebra over d letters up to a fixed level
// ---------------------------------------------------------------------------

/// Dense element of R + R^d + (R^d)^{x2} + ... + (R^d)^{xN}.
class TruncatedTensor {
  public:
    TruncatedTensor() = default;

    TruncatedTensor(int d, int level) : d_(d), level_(level) {
        if (d < 1 || d > 6 || level < 1 || level > 6)
            throw DimensionMismatchError("TruncatedTensor: supported range is d,N in [1,6]");
        lv_.resize(static_cast<std::size_t>(level) + 1);
        std::size_t size = 1;
        for (int i = 0; i <= level; ++i) {
            lv_[static_cast<std::size_t>(i)].assign(size, 0.0);
            size *= static_cast<std::size_t>(d);
        }
    }

    static TruncatedTensor identity(int d, int level) {
        TruncatedTensor t(d, level);
        t.lv_[0][0] = 1.0;
        return t;
    }

    int dim() const { return d_; }
    int level() const { return level_; }
    double scalar() const { return lv_[0][0]; }
    std::vector<double>& at(int l) { return lv_[static_cast<std::size_t>(l)]; }
    const std::vector<double>& at(int l) const { return lv_[static_cast<std::size_t>(l)]; }

    TruncatedTensor& operator+=(const TruncatedTensor& o) {
        require_same_shape(o);
        for (std::size_t l = 0; l < lv_.size(); ++l)
            for (std::size_t i = 0; i < lv_[l].size(); ++i) lv_[l][i] += o.lv_[l][i];
        return *this;
    }

    TruncatedTensor& operator*=(double c) {
        for (auto& l : lv_)
            for (auto& x : l) x *= c;
        return *this;
    }

    friend TruncatedTensor operator+(TruncatedTensor a, const TruncatedTensor& b) { return a += b; }
    friend TruncatedTensor operator*(TruncatedTensor a, double c) { return a *= c; }

    void require_same_shape(const TruncatedTensor& o) const {
        if (d_ != o.d_ || level_ != o.level_)
            throw DimensionMismatchError("TruncatedTensor: shape mismatch");
    }

  private:
    int d_ = 0;
    int level_ = 0;
    std::vector<std::vector<double>> lv_;
};

/// Graded Cauchy product truncated at the common level.
inline TruncatedTensor tensor_mul(const TruncatedTensor& x, const TruncatedTensor& y) {
    x.require_same_shape(y);
    const int d = x.dim(), n = x.level();
    TruncatedTensor z(d, n);
    for (int lz = 0; lz <= n; ++lz) {
        auto& out = z.at(lz);
        for (int lx = 0; lx <= lz; ++lx) {
            const int ly = lz - lx;
            const auto& a = x.at(lx);
            const auto& b = y.at(ly);
            const std::size_t nb = b.size();
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] == 0.0) continue;
                const double ai = a[i];
                double* dst = out.data() + i * nb;
                for (std::size_t j = 0; j < nb; ++j) dst[j] += ai * b[j];
            }
        }
    }
    return z;
}

/// Tensor exponential of a level-1 vector: sum_i v^{xi} / i!.
inline TruncatedTensor texp(const std::vector<double>& v, int level) {
    const int d = static_cast<int>(v.size());
    TruncatedTensor t(d, level);
    t.at(0)[0] = 1.0;
    t.at(1) = v;
    std::vector<double> power = v; // v^{xi} / i!
    for (int l = 2; l <= level; ++l) {
        std::vector<double> next(power.size() * v.size(), 0.0);
        for (std::size_t i = 0; i < power.size(); ++i)
            for (std::size_t j = 0; j < v.size(); ++j)
                next[i * v.size() + j] = power[i] * v[j] / static_cast<double>(l);
        t.at(l) = next;
        power = std::move(next);
    }
    return t;
}

/// Truncated logarithm: log(1 + x) with x = g - e; defined for scalar part 1.
inline TruncatedTensor tlog(const TruncatedTensor& g) {
    const int d = g.dim(), n = g.level();
    TruncatedTensor x = g;
    x.at(0)[0] -= 1.0;
    TruncatedTensor acc(d, n);
    TruncatedTensor power = x;
    double sign = 1.0;
    for (int m = 1; m <= n; ++m) {
        acc += power * (sign / static_cast<double>(m));
        sign = -sign;
        if (m < n) power = tensor_mul(power, x);
    }
    return acc;
}

/// Group inverse via the Neumann series of g = e + x (exact in the truncated
/// algebra since x is nilpotent).
inline TruncatedTensor tinv(const TruncatedTensor& g) {
    const int d = g.dim(), n = g.level();
    TruncatedTensor x = g;
    x.at(0)[0] -= 1.0;
    TruncatedTensor acc = TruncatedTensor::identity(d, n);
    TruncatedTensor power = TruncatedTensor::identity(d, n);
    double sign = -1.0;
    for (int m = 1; m <= n; ++m) {
        power = tensor_mul(power, x);
        acc += power * sign;
        sign = -sign;
    }
    return acc;
}

/// Dilation: scales level i by c^i.
inline TruncatedTensor dilate(const TruncatedTensor& g, double c) {
    TruncatedTensor out = g;
    double f = 1.0;
    for (int l = 1; l <= g.level(); ++l) {
        f *= c;
        for (auto& x : out.at(l)) x *= f;
    }
    return out;
}

using GroupElement = TruncatedTensor;

/// Homogeneous norm max_i |g_i|_F^{1/i}; equivalent to the intrinsic
/// group norm and exactly 1-homogeneous under dilations.
inline double hnorm(const GroupElement& g) {
    double best = 0.0;
    for (int l = 1; l <= g.level(); ++l) {
        double s = 0.0;
        for (double x : g.at(l)) s += x * x;
        best = std::max(best, std::pow(std::sqrt(s), 1.0 / static_cast<double>(l)));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Signatures of piecewise-linear paths
// ---------------------------------------------------------------------------

/// Group-valued path on a grid, started at the identity.
struct RoughPathRecord {
    std::vector<double> times;
    std::vector<GroupElement> elements;

    std::size_t size() const { return times.size(); }
    int dim() const { return elements.empty() ? 0 : elements.front().dim(); }
    int level() const { return elements.empty() ? 0 : elements.front().level(); }

    GroupElement increment(std::size_t i, std::size_t j) const {
        return tensor_mul(tinv(elements[i]), elements[j]);
    }
};

/// Chen construction: running product of tensor exponentials of the segment
/// increments of a piecewise-linear path.
inline RoughPathRecord signature(const std::vector<double>& times,
                                 const std::vector<std::vector<double>>& values, int level) {
    if (times.size() < 2 || times.size() != values.size())
        throw ConfigError("signature: need matching times/values with >= 2 points");
    const int d = static_cast<int>(values.front().size());
    RoughPathRecord rec;
    rec.times = times;
    rec.elements.reserve(times.size());
    rec.elements.push_back(GroupElement::identity(d, level));
    for (std::size_t i = 1; i < times.size(); ++i) {
        std::vector<double> dv(values[i].size());
        for (std::size_t c = 0; c < dv.size(); ++c) dv[c] = values[i][c] - values[i - 1][c];
        rec.elements.push_back(tensor_mul(rec.elements.back(), texp(dv, level)));
    }
    return rec;
}

/// Antisymmetric part of the level-2 increment: the signed areas swept
/// between component pairs over [times[i], times[j]].
inline Eigen::MatrixXd levy_area(const RoughPathRecord& rec, std::size_t i, std::size_t j) {
    if (rec.level() < 2) throw DimensionMismatchError("levy_area: record must have level >= 2");
    const GroupElement inc = rec.increment(i, j);
    const int d = rec.dim();
    Eigen::MatrixXd a(d, d);
    const auto& l2 = inc.at(2);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            a(r, c) = 0.5 * (l2[static_cast<std::size_t>(r * d + c)] -
                             l2[static_cast<std::size_t>(c * d + r)]);
    return a;
}

// ---------------------------------------------------------------------------
// Rough path metrics (grid realizations)
// ---------------------------------------------------------------------------

enum class HomogFlavor { hoelder, pvar };

namespace detail {

inline void require_compatible(const RoughPathRecord& x, const RoughPathRecord& y) {
    if (x.times != y.times) throw GridMismatchError("rough path records on different grids");
    if (x.dim() != y.dim() || x.level() != y.level())
        throw DimensionMismatchError("rough path records of different shape");
}

/// hnorm of the group mismatch of the two increments over [t_i, t_j].
inline double increment_mismatch(const RoughPathRecord& x, const RoughPathRecord& y,
                                 const std::vector<GroupElement>& xinv,
                                 const std::vector<GroupElement>& yinv, std::size_t i,
                                 std::size_t j) {
    const GroupElement xi = tensor_mul(xinv[i], x.elements[j]);
    const GroupElement yi = tensor_mul(yinv[i], y.elements[j]);
    return hnorm(tensor_mul(tinv(xi), yi));
}

inline std::vector<GroupElement> inverses(const RoughPathRecord& x) {
    std::vector<GroupElement> inv;
    inv.reserve(x.size());
    for (const auto& e : x.elements) inv.push_back(tinv(e));
    return inv;
}

} // namespace detail

/// Homogeneous distance between two records on a common grid: either the
/// beta-Hoelder supremum over grid pairs or the p-variation value computed by
/// the partition DP on increment mismatches.
inline double dist_homog(const RoughPathRecord& x, const RoughPathRecord& y, HomogFlavor flavor,
                         double beta_or_p) {
    detail::require_compatible(x, y);
    const auto xinv = detail::inverses(x);
    const auto yinv = detail::inverses(y);
    const std::size_t n = x.size();
    if (flavor == HomogFlavor::hoelder) {
        const double beta = beta_or_p;
        double sup = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dt = x.times[j] - x.times[i];
                if (dt <= 0.0) continue;
                sup = std::max(sup, detail::increment_mismatch(x, y, xinv, yinv, i, j) /
                                        std::pow(dt, beta));
            }
        return sup;
    }
    const double p = beta_or_p;
    if (p < 1.0) throw BadExponentError("dist_homog: p must be >= 1");
    const double total = var::max_partition_sum(n, [&](std::size_t i, std::size_t j) {
        return std::pow(detail::increment_mismatch(x, y, xinv, yinv, i, j), p);
    });
    return std::pow(total, 1.0 / p);
}

/// Inhomogeneous beta-Hoelder distance: per-level supremum of increment
/// differences scaled by |t-s|^(level * beta).
inline double dist_inhomog(const RoughPathRecord& x, const RoughPathRecord& y, double beta) {
    detail::require_compatible(x, y);
    const auto xinv = detail::inverses(x);
    const auto yinv = detail::inverses(y);
    const std::size_t n = x.size();
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dt = x.times[j] - x.times[i];
            if (dt <= 0.0) continue;
            const GroupElement xi = tensor_mul(xinv[i], x.elements[j]);
            const GroupElement yi = tensor_mul(yinv[i], y.elements[j]);
            for (int l = 1; l <= x.level(); ++l) {
                double s = 0.0;
                const auto& a = xi.at(l);
                const auto& b = yi.at(l);
                for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
                sup = std::max(sup, std::sqrt(s) / std::pow(dt, l * beta));
            }
        }
    }
    return sup;
}

/// Record of the constant identity path on the same grid (the zero path).
inline RoughPathRecord identity_record(const RoughPathRecord& like) {
    RoughPathRecord rec;
    rec.times = like.times;
    rec.elements.assign(like.size(), GroupElement::identity(like.dim(), like.level()));
    return rec;
}

inline double norm_homog(const RoughPathRecord& x, HomogFlavor flavor, double beta_or_p) {
    return dist_homog(x, identity_record(x), flavor, beta_or_p);
}

} // namespace gaussrough::rp
