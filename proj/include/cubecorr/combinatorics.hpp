#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"

namespace cubecorr {

inline constexpr int max_streaming_n = 4096;
inline constexpr int max_dense_n = 512;

// C(n, 0..min(n,cap)) by the multiplicative recurrence; division is exact at
// every step because row[k-1]*(n-k+1) is k * C(n,k)
inline std::vector<bigint> binomial_row(int n, int cap = -1) {
    if (n < 0 || n > max_streaming_n)
        throw config_error("binomial_row: n out of [0, " + std::to_string(max_streaming_n) + "]");
    if (cap < 0 || cap > n) cap = n;
    std::vector<bigint> row(static_cast<std::size_t>(cap) + 1);
    row[0] = 1;
    for (int k = 1; k <= cap; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
    return row;
}

class binomial_cache {
public:
    explicit binomial_cache(int n_max) : n_max_(n_max) {
        if (n_max < 0 || n_max > max_dense_n)
            throw config_error("binomial_cache: n_max out of [0, " + std::to_string(max_dense_n) + "]");
        rows_.reserve(static_cast<std::size_t>(n_max_) + 1);
        rows_.push_back({bigint(1)});
        for (int n = 1; n <= n_max_; ++n) {
            std::vector<bigint> row(static_cast<std::size_t>(n) + 1);
            row[0] = 1;
            row[n] = 1;
            for (int k = 1; k < n; ++k) row[k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
            rows_.push_back(std::move(row));
        }
    }

    int n_max() const { return n_max_; }

    // exact C(n,k); zero outside 0 <= k <= n
    const bigint& operator()(int n, int k) const {
        if (n < 0 || n > n_max_) throw config_error("binomial_cache: n out of cached range");
        static const bigint zero{};
        if (k < 0 || k > n) return zero;
        return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

private:
    int n_max_;
    std::vector<std::vector<bigint>> rows_;
};

// shared dense cache for small n, streaming evaluation above it
inline bigint binomial(int n, int k) {
    if (n < 0 || n > max_streaming_n)
        throw config_error("binomial: n out of [0, " + std::to_string(max_streaming_n) + "]");
    if (k < 0 || k > n) return 0;
    static const binomial_cache small(128);
    if (n <= small.n_max()) return small(n, k);
    if (k > n - k) k = n - k;
    bigint v = 1;
    for (int j = 1; j <= k; ++j) {
        v *= n - j + 1;
        v /= j;
    }
    return v;
}

// K_k(i) = sum_j (-1)^j C(i,j) C(n-i, k-j)
inline bigint krawtchouk(int n, int k, int i) {
    if (n < 0 || n > max_streaming_n)
        throw config_error("krawtchouk: n out of [0, " + std::to_string(max_streaming_n) + "]");
    if (k < 0 || k > n || i < 0 || i > n)
        throw std::invalid_argument("krawtchouk: indices out of [0, n]");
    const std::vector<bigint> ci = binomial_row(i, std::min(i, k));
    const std::vector<bigint> cni = binomial_row(n - i, std::min(n - i, k));
    bigint acc = 0;
    const int jlo = std::max(0, k - (n - i));
    const int jhi = std::min(i, k);
    for (int j = jlo; j <= jhi; ++j) {
        bigint term = ci[j] * cni[k - j];
        if (j & 1) acc -= term;
        else acc += term;
    }
    return acc;
}

// sum_{j=0}^{D} (-1)^j C(n,j) = (-1)^D C(n-1, D)
inline bigint alternating_prefix(int n, int D) {
    if (n < 0 || n > max_streaming_n)
        throw config_error("alternating_prefix: n out of [0, " + std::to_string(max_streaming_n) + "]");
    if (D < 0 || D > n) throw std::invalid_argument("alternating_prefix: D out of [0, n]");
    if (n == 0) return 1;
    bigint v = binomial(n - 1, D);
    if (D & 1) v = -v;
    return v;
}

struct krawtchouk_table {
    int n = 0;
    std::vector<std::vector<bigint>> values;  // values[k][i]
};

// full (n+1)x(n+1) table via the three-term recurrence
// (k+1) K_{k+1}(i) = (n-2i) K_k(i) - (n-k+1) K_{k-1}(i), exact division
inline krawtchouk_table make_krawtchouk_table(int n) {
    if (n < 0 || n > max_dense_n)
        throw config_error("krawtchouk_table: n out of [0, " + std::to_string(max_dense_n) + "]");
    krawtchouk_table t;
    t.n = n;
    t.values.assign(static_cast<std::size_t>(n) + 1,
                    std::vector<bigint>(static_cast<std::size_t>(n) + 1));
    for (int i = 0; i <= n; ++i) t.values[0][i] = 1;
    if (n >= 1)
        for (int i = 0; i <= n; ++i) t.values[1][i] = n - 2 * i;
    for (int k = 1; k < n; ++k)
        for (int i = 0; i <= n; ++i) {
            bigint num = bigint(n - 2 * i) * t.values[k][i] - bigint(n - k + 1) * t.values[k - 1][i];
            t.values[k + 1][i] = num / (k + 1);
        }
    return t;
}

}
