#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace gfb {

// splitmix64 finalizer; the mixing primitive everything below is built on.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(a, b), c);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return mix64(mix64(a, b, c), d);
}

// FNV-1a; used to fold strings into seeds.
inline std::uint64_t hash_str(const char* s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 0x100000001b3ULL;
    return h;
}

// Sequential splitmix64 stream. Deliberately not std::mt19937 +
// std::*_distribution: those are not bit-stable across standard libraries,
// and every experiment here promises byte-identical reruns.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n); n > 0. Lemire's unbiased multiply-shift rejection.
    int uniform_int(int n) {
        auto nu = static_cast<std::uint64_t>(n);
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * nu;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < nu) {
            std::uint64_t threshold = (0 - nu) % nu;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * nu;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<int>(m >> 64);
    }

    bool bernoulli(double p) { return next_double() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = uniform_int(i + 1);
            std::swap(v[i], v[static_cast<std::size_t>(j)]);
        }
    }

    // Derive an independent child stream.
    Rng fork(std::uint64_t salt) { return Rng(mix64(next_u64(), salt)); }

private:
    std::uint64_t state_;
};

// Counter-based reward sampler: the draw for (t, c, a) is a pure function of
// (seed, t, c, a), so rewards outside the observed support are simply never
// materialized and replications are order-independent.
class RewardSampler {
public:
    explicit RewardSampler(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double uniform(long long t, int c, int a, std::uint64_t lane = 0) const {
        std::uint64_t h = mix64(seed_, static_cast<std::uint64_t>(t),
                                (static_cast<std::uint64_t>(c) << 32) ^ static_cast<std::uint64_t>(a),
                                lane);
        return static_cast<double>(h >> 11) * 0x1.0p-53;
    }

    double bernoulli(long long t, int c, int a, double mean) const {
        return uniform(t, c, a) < mean ? 1.0 : 0.0;
    }

    // Box-Muller on two counter lanes.
    double normal(long long t, int c, int a) const {
        double u1 = uniform(t, c, a, 1);
        double u2 = uniform(t, c, a, 2);
        if (u1 <= 0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t seed_;
};

} // namespace gfb
