#pragma once

#include <cstdint>
#include <cmath>

namespace dips {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Master seed plus stream id. Every draw is a pure function of the pair, so
// replicate r of a Monte Carlo run owns stream r and parallel runs merge by
// replicate index without any cross-thread state.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngSeed with_stream(std::uint64_t s) const { return RngSeed{seed, s}; }
};

// Deterministic, platform-independent generator (splitmix64 chain). We do not
// use std::uniform_*_distribution anywhere: their output is
// implementation-defined and would break byte-identical reproducibility.
class Rng {
public:
    explicit Rng(RngSeed s) {
        state_ = s.seed;
        // fold the stream id in through two rounds so neighboring streams decorrelate
        std::uint64_t t = s.stream + 0x6a09e667f3bcc909ull;
        state_ ^= splitmix64_next(t);
        splitmix64_next(state_);
    }

    std::uint64_t next_u64() { return splitmix64_next(state_); }

    // unbiased integer in [0, n) by rejection
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // uniform on (0, 1]
    double unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; second value cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = unit();
        const double u2 = unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dips
