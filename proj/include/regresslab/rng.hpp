#ifndef REGRESSLAB_RNG_HPP
#define REGRESSLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace regresslab {

// SplitMix64 stream with Box-Muller normals. The same seed yields the same
// sequence on every platform, which is what pins down every synthetic
// dataset and every shuffle in this library. Single owner by design:
// movable, not copyable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    Rng(const Rng&) = delete;
    Rng& operator=(const Rng&) = delete;
    Rng(Rng&&) = default;
    Rng& operator=(Rng&&) = default;

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1), 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Standard normal via Box-Muller; generates pairs, hands out one at a time.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        // u1 in (0, 1] so the log below is finite.
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    // Uniform integer in [0, n); n must be positive.
    std::size_t next_below(std::size_t n) {
        return static_cast<std::size_t>(next_u64() % n);
    }

private:
    std::uint64_t state_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

// Fisher-Yates shuffle driven by the seeded stream.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    if (items.empty()) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
        const std::size_t j = rng.next_below(i + 1);
        std::swap(items[i], items[j]);
    }
}

} // namespace regresslab

#endif
