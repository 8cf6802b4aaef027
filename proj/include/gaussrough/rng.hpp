#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace gaussrough {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace detail

/**
 * Counter-based random stream keyed by (seed, purpose tag, stream id).
 *
 * Every draw is a pure function of the key and a running counter, so streams
 * with distinct keys are independent and a stream replayed from the same key
 * reproduces its draws bitwise, regardless of how work is scheduled across
 * threads. Gaussian variates use the Box-Muller transform on two uniforms.
 */
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::string_view purpose, std::uint64_t stream_id)
        : key_(mix_key(seed, purpose, stream_id)) {}

    explicit RngStream(std::uint64_t seed) : RngStream(seed, "default", 0) {}

    /// Uniform draw in (0, 1].
    double uniform() {
        const std::uint64_t bits = detail::splitmix64(key_ + counter_++);
        return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal draw (Box-Muller; consumes two uniforms per pair).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

  private:
    static std::uint64_t mix_key(std::uint64_t seed, std::string_view purpose,
                                 std::uint64_t stream_id) {
        std::uint64_t h = detail::splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
        h = detail::splitmix64(h ^ detail::fnv1a(purpose));
        h = detail::splitmix64(h ^ stream_id);
        return h;
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace gaussrough
