#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "errors.hpp"

namespace cubecorr {

inline constexpr int max_wht_n = 24;

// unnormalized fast Walsh-Hadamard transform; applying twice multiplies by N
template <typename T>
void wht_in_place(std::span<T> data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("wht_in_place: length must be a power of two");
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t i = 0; i < n; i += len << 1)
            for (std::size_t j = i; j < i + len; ++j) {
                T a = data[j];
                T b = data[j + len];
                data[j] = a + b;
                data[j + len] = a - b;
            }
}

template <typename T>
void wht_in_place(std::vector<T>& data) {
    wht_in_place(std::span<T>(data));
}

// eigenvalues of the half-space matrix indexed by mask: M is XOR-translation
// invariant, so its spectrum is the transform of its first row
inline std::vector<std::int64_t> eigenvalues_via_wht(int n) {
    if (n < 1 || n > max_wht_n)
        throw cap_error("eigenvalues_via_wht: n out of [1, " + std::to_string(max_wht_n) + "]");
    const std::size_t N = std::size_t(1) << n;
    const int h = n / 2;
    std::vector<std::int64_t> row(N);
    for (std::size_t j = 0; j < N; ++j) row[j] = std::popcount(j) <= h ? 1 : 0;
    wht_in_place(row);
    return row;
}

// spectrum of the distance-d indicator A_d; entry at mask S is K_d(popcount(S))
inline std::vector<std::int64_t> distance_indicator_spectrum(int n, int d) {
    if (n < 1 || n > max_wht_n)
        throw cap_error("distance_indicator_spectrum: n out of [1, " + std::to_string(max_wht_n) + "]");
    if (d < 0 || d > n)
        throw std::invalid_argument("distance_indicator_spectrum: d out of [0, n]");
    const std::size_t N = std::size_t(1) << n;
    std::vector<std::int64_t> row(N);
    for (std::size_t j = 0; j < N; ++j) row[j] = std::popcount(j) == d ? 1 : 0;
    wht_in_place(row);
    return row;
}

}
