#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "bijection.hpp"
#include "errors.hpp"
#include "remainder.hpp"
#include "spectrum.hpp"
#include "wht.hpp"

namespace cubecorr {

inline constexpr int max_joint_n = 13;
inline constexpr int max_dense_oracle_n = 10;
inline constexpr int max_exhaustive_n = 3;
inline constexpr int max_local_search_n = 10;

// ordered pairs (i, j) with popcount(i^j) <= n/2 and popcount(f(i)^f(j)) <= n/2;
// diagonal pairs qualify on both counts
inline bigint joint_count(const bijection& f) {
    if (f.n < 1 || f.n > max_joint_n)
        throw cap_error("joint_count: n out of [1, " + std::to_string(max_joint_n) + "]");
    if (!is_valid(f)) throw std::invalid_argument("joint_count: invalid bijection");
    const std::uint32_t N = std::uint32_t(1) << f.n;
    const int h = f.n / 2;
    std::int64_t count = 0;
    for (std::uint32_t i = 0; i < N; ++i)
        for (std::uint32_t j = 0; j < N; ++j)
            if (std::popcount(i ^ j) <= h && std::popcount(f.map[i] ^ f.map[j]) <= h) ++count;
    return bigint(count);
}

inline bigrat joint_probability(int n, const bijection& f) {
    if (f.n != n) throw std::invalid_argument("joint_probability: n does not match the bijection");
    return bigrat(joint_count(f), pow2(static_cast<unsigned>(2 * n)));
}

namespace detail {

// row-major (H P H)^T for P e_i = e_{f(i)}: row T holds, after a row transform,
// the values (HPH)_{S,T} = sum_i (-1)^{<S,i> + <f(i),T>} over S
inline std::vector<std::int64_t> conjugated_permutation_t(const bijection& f) {
    const std::size_t N = std::size_t(1) << f.n;
    std::vector<std::int64_t> X(N * N);
    for (std::size_t T = 0; T < N; ++T) {
        std::int64_t* row = X.data() + T * N;
        for (std::size_t i = 0; i < N; ++i)
            row[i] = std::popcount(static_cast<std::uint32_t>(f.map[i] & T)) & 1 ? -1 : 1;
        wht_in_place(std::span<std::int64_t>(row, N));
    }
    return X;
}

}

// trace route: (1/N^2) sum_{S,T} lambda_S lambda_T R_{S,T}^2 with R = HPH/N,
// accumulated exactly in int64 and divided once at the end
inline double joint_probability_spectral(int n, const bijection& f) {
    if (n < 1 || n > max_dense_oracle_n)
        throw cap_error("joint_probability_spectral: n out of [1, " +
                        std::to_string(max_dense_oracle_n) + "]");
    if (f.n != n || !is_valid(f))
        throw std::invalid_argument("joint_probability_spectral: invalid bijection");
    const std::size_t N = std::size_t(1) << n;
    const std::vector<std::int64_t> eig = eigenvalues_via_wht(n);
    const std::vector<std::int64_t> X = detail::conjugated_permutation_t(f);
    std::int64_t acc = 0;
    for (std::size_t T = 0; T < N; ++T) {
        const std::int64_t* row = X.data() + T * N;
        std::int64_t rowacc = 0;
        for (std::size_t S = 0; S < N; ++S) rowacc += eig[S] * (row[S] * row[S]);
        acc += eig[T] * rowacc;
    }
    // probability = acc / N^4: two N factors from R = HPH/N, two from 1/N^2
    return static_cast<double>(acc) / std::ldexp(1.0, 4 * n);
}

struct conjugation_report {
    int n = 0;
    double r_empty_empty = 0.0;    // R at (empty, empty); must be 1
    double max_abs_empty_row = 0.0;  // max |R_{empty,T}|, T nonempty
    double max_abs_empty_col = 0.0;  // max |R_{S,empty}|, S nonempty
    double max_row_sum_dev = 0.0;    // B = R∘R row sums vs 1
    double max_col_sum_dev = 0.0;
    double min_entry = 0.0;          // smallest B entry
};

// structure of the conjugated permutation: balanced first row/column and a
// doubly stochastic square; everything is integer-exact, so any violation is
// a real one and throws with the offending index
inline conjugation_report conjugation_structure_report(int n, const bijection& f) {
    if (n < 1 || n > max_dense_oracle_n)
        throw cap_error("conjugation_structure_report: n out of [1, " +
                        std::to_string(max_dense_oracle_n) + "]");
    if (f.n != n || !is_valid(f))
        throw std::invalid_argument("conjugation_structure_report: invalid bijection");
    const std::size_t N = std::size_t(1) << n;
    const std::vector<std::int64_t> X = detail::conjugated_permutation_t(f);
    const double dN = static_cast<double>(N);
    const std::int64_t N2 = static_cast<std::int64_t>(N) * static_cast<std::int64_t>(N);

    conjugation_report rep;
    rep.n = n;
    rep.r_empty_empty = static_cast<double>(X[0]) / dN;
    if (X[0] != static_cast<std::int64_t>(N))
        throw integrity_error("conjugation_structure_report: R[empty][empty] != 1");
    for (std::size_t T = 1; T < N; ++T) {
        if (X[T * N] != 0)
            throw integrity_error("conjugation_structure_report: R[empty][" + std::to_string(T) +
                                  "] != 0");
        rep.max_abs_empty_row = std::max(rep.max_abs_empty_row, std::abs(X[T * N] / dN));
    }
    for (std::size_t S = 1; S < N; ++S) {
        if (X[S] != 0)
            throw integrity_error("conjugation_structure_report: R[" + std::to_string(S) +
                                  "][empty] != 0");
        rep.max_abs_empty_col = std::max(rep.max_abs_empty_col, std::abs(X[S] / dN));
    }
    std::vector<std::int64_t> colsum(N, 0);
    rep.min_entry = std::numeric_limits<double>::infinity();
    for (std::size_t T = 0; T < N; ++T) {
        const std::int64_t* row = X.data() + T * N;
        std::int64_t rowsum = 0;
        for (std::size_t S = 0; S < N; ++S) {
            const std::int64_t sq = row[S] * row[S];
            rowsum += sq;
            colsum[S] += sq;
            rep.min_entry = std::min(rep.min_entry, static_cast<double>(sq) / static_cast<double>(N2));
        }
        // rows of X hold a fixed T: this is a column sum of B = R∘R
        if (rowsum != N2)
            throw integrity_error("conjugation_structure_report: B column " + std::to_string(T) +
                                  " does not sum to 1");
        rep.max_col_sum_dev =
            std::max(rep.max_col_sum_dev, std::abs(static_cast<double>(rowsum) / N2 - 1.0));
    }
    for (std::size_t S = 0; S < N; ++S) {
        if (colsum[S] != N2)
            throw integrity_error("conjugation_structure_report: B row " + std::to_string(S) +
                                  " does not sum to 1");
        rep.max_row_sum_dev =
            std::max(rep.max_row_sum_dev, std::abs(static_cast<double>(colsum[S]) / N2 - 1.0));
    }
    return rep;
}

struct bijection_probe {
    bijection f;
    bigint favorable;  // ordered pair count
    bigrat probability;
    double spectral_probability = std::numeric_limits<double>::quiet_NaN();  // n <= 10 only
    bigrat bound;   // lambda_empty^2/N^2 + r_n
    bigrat margin;  // probability - bound, nonnegative
};

inline bijection_probe probe(const bijection& f) {
    bijection_probe p;
    p.f = f;
    p.favorable = joint_count(f);
    p.probability = bigrat(p.favorable, pow2(static_cast<unsigned>(2 * f.n)));
    const eigenvalue_table tab = spectrum_summary(f.n);
    const bigrat r = rearrangement_min_pairing(tab);
    p.bound = bigrat(tab.lambda_empty * tab.lambda_empty, pow2(static_cast<unsigned>(2 * f.n))) + r;
    p.margin = p.probability - p.bound;
    if (p.margin < 0)
        throw integrity_error("probe: probability fell below the spectral lower bound");
    if (f.n <= max_dense_oracle_n) p.spectral_probability = joint_probability_spectral(f.n, f);
    return p;
}

enum class search_mode { exhaustive, local_search };

struct search_result {
    bijection_probe best;
    search_mode mode = search_mode::exhaustive;
    std::uint64_t evaluated = 0;   // exhaustive: permutations visited
    std::uint64_t iters_used = 0;  // local search: improving swaps applied
    int restarts = 0;
    std::uint64_t seed = 0;
    std::vector<bigint> distinct_counts;  // exhaustive only: favorable counts seen
};

namespace detail {

// rows of M (and of M conjugated by the current map) as packed bit masks
struct swap_searcher {
    int n;
    std::size_t N, words;
    std::vector<std::vector<std::uint64_t>> mrow;
    std::vector<std::vector<std::uint64_t>> grow;  // grow[i] bit j = M[g(i)][g(j)]
    std::vector<std::uint32_t> g;
    std::int64_t count = 0;

    explicit swap_searcher(int n_) : n(n_), N(std::size_t(1) << n_), words((N + 63) / 64) {
        const int h = n / 2;
        mrow.assign(N, std::vector<std::uint64_t>(words, 0));
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j)
                if (std::popcount(static_cast<std::uint32_t>(i ^ j)) <= h)
                    mrow[i][j >> 6] |= std::uint64_t(1) << (j & 63);
    }

    void load(const std::vector<std::uint32_t>& map) {
        g = map;
        grow.assign(N, std::vector<std::uint64_t>(words, 0));
        for (std::size_t i = 0; i < N; ++i) {
            const std::vector<std::uint64_t>& src = mrow[g[i]];
            std::vector<std::uint64_t>& dst = grow[i];
            for (std::size_t j = 0; j < N; ++j)
                if (src[g[j] >> 6] >> (g[j] & 63) & 1) dst[j >> 6] |= std::uint64_t(1) << (j & 63);
        }
        count = 0;
        for (std::size_t i = 0; i < N; ++i) count += and_popcount(mrow[i], grow[i]);
    }

    static std::int64_t and_popcount(const std::vector<std::uint64_t>& x,
                                     const std::vector<std::uint64_t>& y) {
        std::int64_t c = 0;
        for (std::size_t w = 0; w < x.size(); ++w) c += std::popcount(x[w] & y[w]);
        return c;
    }

    bool mbit(std::uint32_t i, std::uint32_t j) const {
        return std::popcount(i ^ j) <= n / 2;
    }

    // change in count when the images at positions a and b are exchanged
    std::int64_t delta(std::uint32_t a, std::uint32_t b) const {
        const std::int64_t t = and_popcount(mrow[a], grow[b]) - and_popcount(mrow[a], grow[a]) -
                               and_popcount(mrow[b], grow[b]) + and_popcount(mrow[b], grow[a]);
        const std::int64_t corner = (mbit(a, b) ? 0 : 1) * (mbit(g[a], g[b]) ? 0 : 1);
        return 2 * (t + 2 * corner);
    }

    void apply(std::uint32_t a, std::uint32_t b) {
        count += delta(a, b);
        std::swap(g[a], g[b]);
        std::swap(grow[a], grow[b]);
        const std::size_t wa = a >> 6, wb = b >> 6;
        const std::uint64_t ma = std::uint64_t(1) << (a & 63), mb = std::uint64_t(1) << (b & 63);
        for (std::size_t i = 0; i < N; ++i) {
            std::vector<std::uint64_t>& row = grow[i];
            const bool ba = row[wa] & ma;
            const bool bb = row[wb] & mb;
            if (ba != bb) {
                row[wa] ^= ma;
                row[wb] ^= mb;
            }
        }
    }
};

}

// smallest joint probability over bijections: exhaustive for n <= 3, seeded
// best-improvement transposition descent with restarts for n <= 10
inline search_result worst_case_search(int n, search_mode mode, std::uint64_t seed,
                                       std::uint64_t iters, int restarts = 8) {
    search_result res;
    res.mode = mode;
    res.seed = seed;
    if (mode == search_mode::exhaustive) {
        if (n < 1 || n > max_exhaustive_n)
            throw cap_error("worst_case_search: exhaustive mode refused for n > " +
                            std::to_string(max_exhaustive_n) +
                            " (N! candidates); use local search");
        const std::uint32_t N = std::uint32_t(1) << n;
        const int h = n / 2;
        bijection f;
        f.n = n;
        f.family = "search";
        f.map.resize(N);
        std::iota(f.map.begin(), f.map.end(), 0u);
        std::vector<std::uint32_t> best_map = f.map;
        std::int64_t best_count = std::numeric_limits<std::int64_t>::max();
        std::set<std::int64_t> counts;
        do {
            std::int64_t c = 0;
            for (std::uint32_t i = 0; i < N; ++i)
                for (std::uint32_t j = 0; j < N; ++j)
                    if (std::popcount(i ^ j) <= h && std::popcount(f.map[i] ^ f.map[j]) <= h) ++c;
            counts.insert(c);
            if (c < best_count) {
                best_count = c;
                best_map = f.map;
            }
            ++res.evaluated;
        } while (std::next_permutation(f.map.begin(), f.map.end()));
        f.map = std::move(best_map);
        res.best = probe(f);
        res.distinct_counts.assign(counts.begin(), counts.end());
        return res;
    }

    if (n < 1 || n > max_local_search_n)
        throw cap_error("worst_case_search: local search refused above n = " +
                        std::to_string(max_local_search_n));
    if (restarts < 1) throw std::invalid_argument("worst_case_search: restarts must be >= 1");
    res.restarts = restarts;
    const std::uint32_t N = std::uint32_t(1) << n;
    detail::swap_searcher st(n);
    splitmix64 rng(seed);
    std::vector<std::uint32_t> start(N);
    std::iota(start.begin(), start.end(), 0u);
    std::vector<std::uint32_t> best_map;
    std::int64_t best_count = std::numeric_limits<std::int64_t>::max();
    for (int rs = 0; rs < restarts; ++rs) {
        rng.shuffle(start.begin(), start.end());
        st.load(start);
        std::uint64_t budget = iters;
        while (budget > 0) {
            std::int64_t best_delta = 0;
            std::uint32_t pa = 0, pb = 0;
            for (std::uint32_t a = 0; a + 1 < N; ++a)
                for (std::uint32_t b = a + 1; b < N; ++b) {
                    const std::int64_t d = st.delta(a, b);
                    if (d < best_delta) {
                        best_delta = d;
                        pa = a;
                        pb = b;
                    }
                }
            if (best_delta >= 0) break;
            st.apply(pa, pb);
            ++res.iters_used;
            --budget;
        }
        if (st.count < best_count) {
            best_count = st.count;
            best_map = st.g;
        }
    }
    bijection f;
    f.n = n;
    f.family = "search";
    f.seed = seed;
    f.map = std::move(best_map);
    res.best = probe(f);
    return res;
}

struct exhaustive_summary {
    int n = 0;
    bigint minimum_count;
    bigrat minimum_probability;
    bigrat bound;
    std::vector<bigint> distinct_counts;
};

inline exhaustive_summary exhaustive_minimum(int n) {
    search_result res = worst_case_search(n, search_mode::exhaustive, 0, 0);
    exhaustive_summary s;
    s.n = n;
    s.minimum_count = res.best.favorable;
    s.minimum_probability = res.best.probability;
    s.bound = res.best.bound;
    s.distinct_counts = std::move(res.distinct_counts);
    return s;
}

}
