#ifndef GLMSEL_NUMERICS_RANDOM_HPP
#define GLMSEL_NUMERICS_RANDOM_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <variant>

namespace glmsel {

namespace detail {

// Philox4x32-10 (Salmon et al., SC'11): one 128-bit block per counter value.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

/**
 * Counter-based random stream identified by `(seed, stream_id)`.
 *
 * The k-th 64-bit output is a pure function of `(seed, stream_id, k)`, so a
 * stream is a small value that can be copied, handed to another thread, or
 * rewound. Copies replay the same sequence.
 */
class RngStream {
public:
    constexpr RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
        : seed_(seed), stream_id_(stream_id) {}

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }
    std::uint64_t position() const noexcept { return counter_; }

    /// Child stream for a named purpose; independent of the parent's sequence.
    RngStream substream(std::uint64_t tag) const noexcept {
        return RngStream(seed_, detail::mix64(stream_id_ ^ detail::mix64(tag + 0x632BE59BD9B4E019ull)));
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t block = counter_ >> 1;
        const bool high = (counter_ & 1u) != 0;
        ++counter_;
        const auto out = detail::philox4x32(
            {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
             static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        return high ? (static_cast<std::uint64_t>(out[3]) << 32 | out[2])
                    : (static_cast<std::uint64_t>(out[1]) << 32 | out[0]);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    friend bool operator==(const RngStream&, const RngStream&) = default;

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;
};

struct UniformDist {
    double lower = 0.0;
    double upper = 1.0;
};
struct NormalDist {
    double mean = 0.0;
    double sd = 1.0;
};
struct BernoulliDist {
    double p;
};
struct PoissonDist {
    double mean;
};
struct GammaDist {
    double shape;
    double scale;

    static GammaDist with_mean(double shape, double mean) { return {shape, mean / shape}; }
};

using DistributionSpec = std::variant<UniformDist, NormalDist, BernoulliDist, PoissonDist, GammaDist>;

class DistributionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double sample_normal(RngStream& s) {
    // Box-Muller, cosine branch only: two uniforms per variate.
    const double u1 = 1.0 - s.next_uniform();
    const double u2 = s.next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia & Tsang (2000); shape < 1 via the U^(1/shape) boost.
inline double sample_gamma(RngStream& s, double shape) {
    if (shape < 1.0) {
        const double g = sample_gamma(s, shape + 1.0);
        const double u = 1.0 - s.next_uniform();
        return g * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = sample_normal(s);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - s.next_uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

inline double sample_poisson_inversion(RngStream& s, double mean) {
    const double u = s.next_uniform();
    double k = 0.0;
    double p = std::exp(-mean);
    double cdf = p;
    while (u >= cdf) {
        k += 1.0;
        p *= mean / k;
        cdf += p;
        if (p <= 0.0 && cdf < u) {
            break;  // u landed in the unresolvable tail of the floating-point CDF
        }
    }
    return k;
}

// Hoermann (1993) transformed rejection with squeeze (PTRS), for mean >= 10.
inline double sample_poisson_ptrs(RngStream& s, double mean) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = s.next_uniform() - 0.5;
        const double v = s.next_uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return k;
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -mean + k * loglam - std::lgamma(k + 1.0)) {
            return k;
        }
    }
}

}  // namespace detail

/// Draws one variate, advancing `stream` in place.
inline double sample(RngStream& stream, const DistributionSpec& dist) {
    return std::visit(
        [&stream](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, UniformDist>) {
                if (!(d.lower < d.upper)) throw DistributionError("uniform: lower must be < upper");
                return d.lower + (d.upper - d.lower) * stream.next_uniform();
            } else if constexpr (std::is_same_v<D, NormalDist>) {
                if (!(d.sd >= 0.0)) throw DistributionError("normal: sd must be >= 0");
                return d.mean + d.sd * detail::sample_normal(stream);
            } else if constexpr (std::is_same_v<D, BernoulliDist>) {
                if (!(d.p >= 0.0 && d.p <= 1.0)) throw DistributionError("bernoulli: p outside [0, 1]");
                return stream.next_uniform() < d.p ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<D, PoissonDist>) {
                if (!(d.mean >= 0.0) || !std::isfinite(d.mean)) throw DistributionError("poisson: mean must be >= 0");
                if (d.mean == 0.0) return 0.0;
                return d.mean < 10.0 ? detail::sample_poisson_inversion(stream, d.mean)
                                     : detail::sample_poisson_ptrs(stream, d.mean);
            } else {
                if (!(d.shape > 0.0) || !(d.scale > 0.0)) throw DistributionError("gamma: shape and scale must be > 0");
                return d.scale * detail::sample_gamma(stream, d.shape);
            }
        },
        dist);
}

struct Draw {
    double value;
    RngStream next;
};

/// Pure form of `sample`: the input stream is untouched.
inline Draw draw(RngStream stream, const DistributionSpec& dist) {
    const double value = sample(stream, dist);
    return {value, stream};
}

}  // namespace glmsel

#endif  // GLMSEL_NUMERICS_RANDOM_HPP
