#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace snav {

/// Seeded generator with draw rules fixed independently of the standard library.
///
/// std::uniform_int_distribution and std::shuffle are implementation-defined, so
/// files produced on one toolchain might not match another. mt19937_64's raw
/// output is fully specified; bounded draws here use plain rejection sampling on it.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin() { return (engine_() >> 63) != 0; }

    /// Fisher-Yates, drawing from the last position down.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace snav
