#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace plreg {

// splitmix64 finalizer; derives independent stream seeds from (seed, index)
// so that replicate results do not depend on scheduling order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic uniform source. uniform01() lies strictly inside (0,1) and
// does not go through std distribution objects, whose output is
// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() {
        const std::uint64_t bits = gen_() >> 11;  // top 53 bits
        return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    }

private:
    std::mt19937_64 gen_;
};

inline std::vector<double> uniform_vector(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> u(n);
    for (auto& x : u) x = rng.uniform01();
    return u;
}

}  // namespace plreg
