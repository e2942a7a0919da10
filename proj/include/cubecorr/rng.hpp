#pragma once

#include <cstdint>
#include <stdexcept>

namespace cubecorr {

// splitmix64; used for every randomized path so that a seed pins outputs
// byte-for-byte across platforms (std::uniform_int_distribution does not)
class splitmix64 {
public:
    explicit splitmix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), rejection sampled
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("splitmix64::below: zero bound");
        std::uint64_t threshold = -bound % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // uniform in [0, 1) with 53 random bits
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    template <typename RandomIt>
    void shuffle(RandomIt first, RandomIt last) {
        using std::swap;
        auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) swap(first[i - 1], first[below(i)]);
    }

private:
    std::uint64_t state_;
};

}
