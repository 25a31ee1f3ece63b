#pragma once

// Seeded, splittable random streams and the samplers used by the lattice
// models. Streams are counter-based (Philox4x32-10, Salmon et al., SC 2011):
// the value at (master_seed, lane, block) is a pure function of its inputs,
// so lane i is usable without generating lanes 0..i-1 and independent lanes
// can be consumed concurrently.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace glpp {

// Identifies one independent stream. Distinct (master_seed, lane) pairs give
// statistically independent sequences; equal pairs give bit-identical ones.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t lane = 0;
};

enum class DistKind { exponential, gumbel, gamma, inverse_gamma };

// One of the four weight laws: Exp(1), standard Gumbel, Gamma(shape, 1) or
// its reciprocal. `shape` is meaningful for the gamma kinds only.
struct DistributionSpec {
    DistKind kind = DistKind::exponential;
    double shape = 1.0;

    static DistributionSpec exponential() { return {DistKind::exponential, 1.0}; }
    static DistributionSpec gumbel() { return {DistKind::gumbel, 1.0}; }
    static DistributionSpec gamma(double shape) { return {DistKind::gamma, shape}; }
    static DistributionSpec inverse_gamma(double shape) { return {DistKind::inverse_gamma, shape}; }

    void validate() const {
        if ((kind == DistKind::gamma || kind == DistKind::inverse_gamma) && !(shape > 0.0))
            throw std::invalid_argument("DistributionSpec: gamma shape must be positive");
    }
};

inline const char* to_string(DistKind k) {
    switch (k) {
        case DistKind::exponential: return "exponential";
        case DistKind::gumbel: return "gumbel";
        case DistKind::gamma: return "gamma";
        case DistKind::inverse_gamma: return "inverse_gamma";
    }
    return "?";
}

namespace detail {

inline constexpr std::uint32_t philox_mul0 = 0xD2511F53u;
inline constexpr std::uint32_t philox_mul1 = 0xCD9E8D57u;
inline constexpr std::uint32_t philox_weyl0 = 0x9E3779B9u;
inline constexpr std::uint32_t philox_weyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(philox_mul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(philox_mul1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    for (int round = 0;; ++round) {
        philox_round(ctr, key);
        if (round == 9) break;
        key[0] += philox_weyl0;
        key[1] += philox_weyl1;
    }
    return ctr;
}

// SplitMix64 finalizer; used for deriving sub-seeds, not as a generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

// Deterministic derivation of an independent 64-bit seed from a master seed
// and a tag (used to split one CLI seed into per-purpose sub-seeds).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) {
    return detail::mix64(detail::mix64(master_seed ^ 0x7F4A7C15A5A5A5A5ull) ^ tag);
}

// Single-consumer stream of random bits. Construction costs nothing; state is
// (key, lane, block) and every output block is philox(key, lane:block).
class Stream {
public:
    Stream(std::uint64_t key, std::uint64_t lane) noexcept
        : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)}, lane_(lane) {}

    explicit Stream(const StreamKey& k) noexcept : Stream(k.master_seed, k.lane) {}

    std::uint64_t next_bits() {
        if (avail_ == 0) refill();
        --avail_;
        const int base = avail_ == 1 ? 0 : 2;
        return static_cast<std::uint64_t>(buf_[base]) |
               (static_cast<std::uint64_t>(buf_[base + 1]) << 32);
    }

    // Uniform on the open interval (0,1): the 53-bit integer lattice is
    // offset by 1/2 so the log transforms downstream never see 0 or 1.
    double uniform() {
        return (static_cast<double>(next_bits() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    void refill() {
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
            static_cast<std::uint32_t>(lane_), static_cast<std::uint32_t>(lane_ >> 32)};
        buf_ = detail::philox4x32_10(ctr, key_);
        ++block_;
        avail_ = 2;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t lane_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int avail_ = 0;
};

inline Stream derive_stream(std::uint64_t master_seed, std::uint64_t lane) {
    return Stream(master_seed, lane);
}

inline Stream derive_stream(const StreamKey& key) { return Stream(key); }

// Exp(1) by inverse transform on an open-(0,1) uniform; never 0 or +inf.
inline double sample_exponential(Stream& s) { return -std::log(s.uniform()); }

// Standard Gumbel (CDF exp(-exp(-y))), computed as -log of the exponential
// draw it consumes; the functional identity is exact bitwise.
inline double sample_gumbel(Stream& s) { return -std::log(sample_exponential(s)); }

namespace detail {

// Marsaglia polar method. The second value of each accepted pair is
// discarded so the sampler stays a pure function of the stream position.
inline double sample_standard_normal(Stream& s) {
    double x, y, r2;
    do {
        x = 2.0 * s.uniform() - 1.0;
        y = 2.0 * s.uniform() - 1.0;
        r2 = x * x + y * y;
    } while (r2 >= 1.0 || r2 == 0.0);
    return x * std::sqrt(-2.0 * std::log(r2) / r2);
}

// Marsaglia & Tsang (2000) rejection sampler with the squeeze step; valid
// for shape >= 1.
inline double sample_gamma_large(Stream& s, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = sample_standard_normal(s);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = s.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace detail

// Gamma(shape, 1). shape == 1 short-circuits to the exponential sampler so
// couplings built on the exponential case hold exactly in code; shape < 1
// uses the boosting transform Gamma(a) = Gamma(a+1) * U^(1/a).
inline double sample_gamma(Stream& s, double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be positive");
    if (shape == 1.0) return sample_exponential(s);
    if (shape < 1.0) {
        const double boost = std::pow(s.uniform(), 1.0 / shape);
        return detail::sample_gamma_large(s, shape + 1.0) * boost;
    }
    return detail::sample_gamma_large(s, shape);
}

inline double sample_inverse_gamma(Stream& s, double shape) {
    return 1.0 / sample_gamma(s, shape);
}

inline double sample(Stream& s, const DistributionSpec& d) {
    switch (d.kind) {
        case DistKind::exponential: return sample_exponential(s);
        case DistKind::gumbel: return sample_gumbel(s);
        case DistKind::gamma: return sample_gamma(s, d.shape);
        case DistKind::inverse_gamma: return sample_inverse_gamma(s, d.shape);
    }
    throw std::invalid_argument("sample: unknown distribution kind");
}

} // namespace glpp
