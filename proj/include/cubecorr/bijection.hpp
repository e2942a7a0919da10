#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace cubecorr {

inline constexpr int max_bijection_n = 24;

// bijection of hypercube vertices; vertex i has coordinate b equal to -1
// exactly when bit b of i is set
struct bijection {
    int n = 0;
    std::vector<std::uint32_t> map;  // image of vertex index i
    std::string family;              // identity | complement | coordinate | random | search
    std::uint64_t seed = 0;
};

inline bool is_valid(const bijection& f) {
    if (f.n < 1 || f.n > max_bijection_n) return false;
    const std::size_t N = std::size_t(1) << f.n;
    if (f.map.size() != N) return false;
    std::vector<char> seen(N, 0);
    for (std::uint32_t v : f.map) {
        if (v >= N || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

namespace detail {

inline void check_n(int n, const char* where) {
    if (n < 1 || n > max_bijection_n)
        throw config_error(std::string(where) + ": n out of [1, " + std::to_string(max_bijection_n) + "]");
}

}

inline bijection identity_bijection(int n) {
    detail::check_n(n, "identity_bijection");
    bijection f;
    f.n = n;
    f.family = "identity";
    f.map.resize(std::size_t(1) << n);
    std::iota(f.map.begin(), f.map.end(), 0u);
    return f;
}

inline bijection complement_bijection(int n) {
    detail::check_n(n, "complement_bijection");
    bijection f;
    f.n = n;
    f.family = "complement";
    const std::uint32_t full = (std::uint32_t(1) << n) - 1;
    f.map.resize(std::size_t(1) << n);
    for (std::size_t i = 0; i < f.map.size(); ++i) f.map[i] = static_cast<std::uint32_t>(i) ^ full;
    return f;
}

// distance-preserving map: permute coordinates, then flip the masked ones
inline bijection coordinate_bijection(int n, std::span<const int> coord_perm, std::uint32_t flip_mask = 0) {
    detail::check_n(n, "coordinate_bijection");
    if (static_cast<int>(coord_perm.size()) != n)
        throw std::invalid_argument("coordinate_bijection: coordinate permutation must have length n");
    std::vector<char> seen(n, 0);
    for (int p : coord_perm) {
        if (p < 0 || p >= n || seen[p])
            throw std::invalid_argument("coordinate_bijection: not a permutation of [0, n)");
        seen[p] = 1;
    }
    bijection f;
    f.n = n;
    f.family = "coordinate";
    f.map.resize(std::size_t(1) << n);
    for (std::size_t i = 0; i < f.map.size(); ++i) {
        std::uint32_t out = 0;
        for (int b = 0; b < n; ++b)
            if (i >> b & 1) out |= std::uint32_t(1) << coord_perm[b];
        f.map[i] = out ^ flip_mask;
    }
    return f;
}

inline bijection random_bijection(int n, std::uint64_t seed) {
    detail::check_n(n, "random_bijection");
    bijection f;
    f.n = n;
    f.family = "random";
    f.seed = seed;
    f.map.resize(std::size_t(1) << n);
    std::iota(f.map.begin(), f.map.end(), 0u);
    splitmix64 rng(seed);
    rng.shuffle(f.map.begin(), f.map.end());
    return f;
}

// g after f: (g*f)(i) = g(f(i))
inline bijection compose(const bijection& g, const bijection& f) {
    if (g.n != f.n) throw std::invalid_argument("compose: mismatched n");
    bijection out;
    out.n = f.n;
    out.family = "composite";
    out.map.resize(f.map.size());
    for (std::size_t i = 0; i < f.map.size(); ++i) out.map[i] = g.map[f.map[i]];
    return out;
}

// uniformly random signed coordinate permutation, for invariance checks
inline bijection random_isometry(int n, std::uint64_t seed) {
    detail::check_n(n, "random_isometry");
    splitmix64 rng(seed);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm.begin(), perm.end());
    const std::uint32_t flips = static_cast<std::uint32_t>(rng.next() & ((std::uint64_t(1) << n) - 1));
    bijection f = coordinate_bijection(n, perm, flips);
    f.seed = seed;
    return f;
}

}
