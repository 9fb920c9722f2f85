#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>

namespace frontlearn::numerics {

/// SplitMix64 (Steele, Lea & Flood 2014): a Weyl counter advanced by
/// 0x9E3779B97F4A7C15 and passed through a fixed 64-bit mixing function.
/// Only integer adds, xors, shifts and multiplies are used, so the stream
/// for a given seed is identical on every platform and in any language
/// that has wrapping 64-bit unsigned arithmetic.
///
/// Derived quantities:
///   uniform()       = (next() >> 11) * 2^-53, in [0, 1)
///   uniform(lo, hi) = lo + (hi - lo) * uniform()
///   below(n)        = rejection-sampled integer in [0, n)
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % n;
    }

    /// Fisher-Yates shuffle driven by below(); std::shuffle is not portable.
    template <class T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = below(i);
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

/// Seed for the k-th independent stream derived from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) noexcept {
    Rng r(master ^ (0xD1B54A32D192ED03ULL * (k + 1)));
    return r.next();
}

}  // namespace frontlearn::numerics
