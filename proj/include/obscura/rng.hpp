#pragma once

#include <cstdint>
#include <vector>

namespace obscura {

// All randomness flows through this splitmix64 core. std::uniform_int_distribution
// is implementation-defined, so nothing here touches <random>: identical seeds must
// give identical datasets on every platform.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a child seed from a parent seed and a stream tag. Distinct tags give
/// decorrelated streams; the derivation is pure, so child streams do not depend
/// on how much of the parent stream was consumed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1));
    std::uint64_t a = splitmix64_next(state);
    std::uint64_t b = splitmix64_next(state);
    return a ^ (b << 1 | b >> 63);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() { return splitmix64_next(state_); }

    /// Uniform integer in [lo, hi], inclusive. Rejection keeps it unbiased.
    int uniform_int(int lo, int hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = ~0ULL - ~0ULL % span;
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return lo + static_cast<int>(x % span);
    }

    /// Uniform double in [lo, hi).
    double uniform_real(double lo, double hi) {
        double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + unit * (hi - lo);
    }

    bool bernoulli(double p) { return uniform_real(0.0, 1.0) < p; }

    template <typename T>
    const T& pick(const std::vector<T>& pool) {
        return pool[static_cast<std::size_t>(uniform_int(0, static_cast<int>(pool.size()) - 1))];
    }

    /// Fisher-Yates; draw order is part of the deterministic contract.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = uniform_int(0, i);
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace obscura
