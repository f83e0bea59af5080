#pragma once
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace qrl {

inline uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed derivation scheme: seed_for(master, i) depends only on (master, i),
// so extending a seed list never perturbs earlier runs.
inline uint64_t derive_seed(uint64_t master, uint64_t index) {
    uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(s);
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

// mt19937_64 wrapper with hand-rolled draws. The std distribution objects are
// implementation-defined; these mappings are pinned so identical seeds give
// identical streams on every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    // uniform in [0,1), 53-bit resolution
    double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0,n), rejection sampled
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
        const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    bool bernoulli(double p) { return uniform_double() < p; }

    // index sampled proportionally to non-negative weights
    size_t sample_weights(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw std::invalid_argument("sample_weights: negative weight");
            total += w;
        }
        if (total <= 0.0) throw std::invalid_argument("sample_weights: zero total weight");
        double u = uniform_double() * total;
        double acc = 0.0;
        for (size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.size() - 1;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace qrl
