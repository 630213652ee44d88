#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hsis::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Independent sub-stream seed, e.g. for replication `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

/// Counter-based uniform draw in [0,1): a pure function of its arguments.
/// Draws keyed by (node, round) stay aligned between runs that share a seed
/// even when the set of nodes that consume randomness differs, which is what
/// makes common-random-number couplings monotone.
inline double u01(std::uint64_t seed, std::uint64_t round, std::uint64_t node,
                  std::uint64_t channel) {
    std::uint64_t h = splitmix64(seed + 0x9e3779b97f4a7c15ull * round);
    h = splitmix64(h ^ (node + 0xbf58476d1ce4e5b9ull * channel));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Sequential engine (splitmix64 stream) for shuffles and sampling.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    double next_u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Unbiased integer in [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Engine::below: n must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

private:
    std::uint64_t state_;
};

/// Fisher-Yates shuffle; platform-independent unlike std::shuffle.
template <class T>
void shuffle(std::vector<T>& v, Engine& eng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(eng.below(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace hsis::rng
