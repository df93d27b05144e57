#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hyperstat/errors.hpp"

namespace hyperstat::rng {

/// SplitMix64 step; used only for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a hash of a purpose label. Named substreams are derived as
/// stream id = fnv1a64(label), so the mapping from purpose to stream is
/// stable across runs and builds.
inline std::uint64_t fnv1a64(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// xoshiro256++ generator. Small, fast, and fully under our control, so
/// sequences are bit-reproducible for a given (seed, label, block) triple
/// on every platform and thread count.
class Stream {
  public:
    Stream() : state_{1, 2, 3, 4} {}

    /// Derives the stream keyed by (seed, stream id, block index).
    /// The state is filled from a SplitMix64 chain over the key words.
    static Stream keyed(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t block) {
        // Each key word is absorbed through a full SplitMix64 mix before the
        // next, so nearby (seed, block) pairs cannot alias each other.
        std::uint64_t s = seed ^ 0x6a09e667f3bcc908ULL;  // domain separation from raw seeds
        s = splitmix64(s) ^ stream_id;
        s = splitmix64(s) ^ block;
        Stream r;
        for (auto& w : r.state_) w = splitmix64(s);
        // xoshiro must not start from the all-zero state
        if ((r.state_[0] | r.state_[1] | r.state_[2] | r.state_[3]) == 0) r.state_[0] = 1;
        return r;
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // floor(u * n) has bias O(n/2^53); negligible for the index ranges here
        // and, unlike rejection sampling, consumes exactly one draw.
        auto k = static_cast<std::uint64_t>(uniform01() * static_cast<double>(n));
        return k >= n ? n - 1 : k;
    }

    /// Standard normal via Box-Muller (cosine branch). Consumes exactly two
    /// uniforms per call, which keeps stream positions data-independent.
    double normal() {
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_;
};

/// Stream for a named purpose. All randomness in the library flows from an
/// explicit 64-bit seed through these named substreams.
inline Stream make_stream(std::uint64_t seed, std::string_view label, std::uint64_t block = 0) {
    return Stream::keyed(seed, fnv1a64(label), block);
}

/// Tabulated inverse CDF of an unnormalized density on [a, b], built on a
/// uniform grid with trapezoidal accumulation and sampled by linear
/// interpolation. Resolution and interpolation error are part of the
/// estimator definition wherever this is used.
class InverseCdfTable {
  public:
    template <class Density>
    InverseCdfTable(Density&& density, double a, double b, int resolution = 2048)
        : lo_(a), hi_(b), cdf_(static_cast<std::size_t>(resolution)) {
        if (!(b > a) || resolution < 2) throw PreconditionError("InverseCdfTable: bad domain or resolution");
        const int m = resolution;
        const double h = (b - a) / (m - 1);
        std::vector<double> f(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            f[i] = density(a + h * i);
            if (!(f[i] >= 0.0) || !std::isfinite(f[i]))
                throw NumericError("InverseCdfTable: density must be finite and nonnegative");
        }
        cdf_[0] = 0.0;
        for (int i = 1; i < m; ++i) cdf_[i] = cdf_[i - 1] + 0.5 * (f[i - 1] + f[i]) * h;
        const double total = cdf_.back();
        if (!(total > 0.0)) throw NumericError("InverseCdfTable: density integrates to zero");
        for (auto& c : cdf_) c /= total;
        cdf_.back() = 1.0;
    }

    /// Maps u in [0, 1) to the tabulated quantile.
    double sample(double u) const {
        const auto m = cdf_.size();
        // binary search for the segment with cdf_[k] <= u < cdf_[k+1]
        std::size_t lo = 0, hi = m - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (cdf_[mid] <= u)
                lo = mid;
            else
                hi = mid;
        }
        const double span = cdf_[hi] - cdf_[lo];
        const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
        const double h = (hi_ - lo_) / static_cast<double>(m - 1);
        return lo_ + h * (static_cast<double>(lo) + frac);
    }

  private:
    double lo_, hi_;
    std::vector<double> cdf_;
};

}  // namespace hyperstat::rng
