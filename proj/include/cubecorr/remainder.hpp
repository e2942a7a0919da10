#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "combinatorics.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

namespace cubecorr {

inline constexpr int max_exact_remainder_n = 4096;
inline constexpr int max_birkhoff_n = 10;
inline constexpr double sinkhorn_tolerance = 1e-10;
inline constexpr int sinkhorn_max_sweeps = 10000;

// (1/N^2) sum_{i=1}^{N-1} lambda_i lambda_{N-i}: the descending multiset paired
// against its own reverse. Blocks occupy consecutive position intervals, and
// the reflection i -> N-i walks the blocks backward, so a two-pointer sweep
// consuming min(remaining_front, remaining_back) positions at a time yields
// exactly the interval-overlap lengths without materializing the multiset.
inline bigrat rearrangement_min_pairing(const eigenvalue_table& tab) {
    const bigint N = pow2(static_cast<unsigned>(tab.n));
    bigint total = 0;
    for (const spectrum_block& blk : tab.sorted_blocks) total += blk.multiplicity;
    if (total != N - 1)
        throw integrity_error("rearrangement_min_pairing: multiplicities do not sum to N-1");
    const std::vector<spectrum_block>& blocks = tab.sorted_blocks;
    std::size_t a = 0;
    std::size_t b = blocks.size() - 1;
    bigint rem_a = blocks[a].multiplicity;
    bigint rem_b = blocks[b].multiplicity;
    bigint sum = 0;
    for (;;) {
        const bigint step = std::min(rem_a, rem_b);
        sum += blocks[a].value * blocks[b].value * step;
        rem_a -= step;
        rem_b -= step;
        if (rem_a == 0) {
            if (++a == blocks.size()) break;
            rem_a = blocks[a].multiplicity;
        }
        if (rem_b == 0) {
            if (b == 0) break;
            rem_b = blocks[--b].multiplicity;
        }
    }
    return bigrat(sum, N * N);
}

inline bigrat remainder_exact(int n) {
    if (n < 1) throw config_error("remainder_exact: n must be >= 1");
    if (n > max_exact_remainder_n)
        throw cap_error("remainder_exact: n above " + std::to_string(max_exact_remainder_n));
    return rearrangement_min_pairing(spectrum_summary(n));
}

namespace detail {

// ln mu_{2k+1} at n = 4m, via log-gamma
inline double log_mu(int m, int k) {
    const double a = (2 * k + 1) / 2.0;
    const double b = (4.0 * m + 1 - 2 * k) / 2.0;
    return (4 * m - 1) * std::numbers::ln2 - std::log(std::numbers::pi) + std::lgamma(a) +
           std::lgamma(b) - std::lgamma(a + b);
}

// total multiplicity of class 2k+1: levels {2k, 2k+1, n-2k, n-2k+1} in [1, n]
inline bigint class_count(int n, int k, const std::vector<bigint>& binom_row_n) {
    int cand[4] = {2 * k, 2 * k + 1, n - 2 * k, n - 2 * k + 1};
    std::sort(cand, cand + 4);
    bigint cnt = 0;
    for (int t = 0; t < 4; ++t) {
        if (cand[t] < 1 || cand[t] > n) continue;
        if (t > 0 && cand[t] == cand[t - 1]) continue;
        cnt += binom_row_n[static_cast<std::size_t>(cand[t])];
    }
    return cnt;
}

}

// float r_n. For n = 4m the class structure gives every block value in log
// space through log-gamma, with exact bigint positions, so no exact eigenvalue
// is ever formed; other n fall back to the exact route downcast.
inline double remainder_float(int n) {
    if (n < 1) throw config_error("remainder_float: n must be >= 1");
    if (n % 4 != 0) {
        if (n > max_exact_remainder_n)
            throw cap_error("remainder_float: no route for n above " +
                            std::to_string(max_exact_remainder_n) + " unless n = 4m");
        return to_double(remainder_exact(n));
    }
    if (n > max_streaming_n)
        throw cap_error("remainder_float: n above " + std::to_string(max_streaming_n));
    const int m = n / 4;
    const std::vector<bigint> crow = binomial_row(n);
    struct fblock {
        double logmu;
        int sign;
        bigint count;
    };
    // descending eigenvalue order: positive classes by even k ascending, then
    // negative classes by odd k descending (largest odd label first)
    std::vector<fblock> blocks;
    for (int k = 0; k <= m; k += 2)
        blocks.push_back({detail::log_mu(m, k), +1, detail::class_count(n, k, crow)});
    for (int k = m % 2 == 0 ? m - 1 : m; k >= 1; k -= 2)
        blocks.push_back({detail::log_mu(m, k), -1, detail::class_count(n, k, crow)});

    const double log_scale = -2.0 * n * std::numbers::ln2;
    std::size_t a = 0;
    std::size_t b = blocks.size() - 1;
    bigint rem_a = blocks[a].count;
    bigint rem_b = blocks[b].count;
    double acc = 0.0;
    for (;;) {
        const bigint step = std::min(rem_a, rem_b);
        const double term = std::exp(blocks[a].logmu + blocks[b].logmu +
                                     log2_abs(step) * std::numbers::ln2 + log_scale);
        acc += blocks[a].sign * blocks[b].sign * term;
        rem_a -= step;
        rem_b -= step;
        if (rem_a == 0) {
            if (++a == blocks.size()) break;
            rem_a = blocks[a].count;
        }
        if (rem_b == 0) {
            if (b == 0) break;
            rem_b = blocks[--b].count;
        }
    }
    return acc;
}

// partition sum approximating the arcsine integral over (0, 1/2], whose limit
// is pi/2; nodes x_k = (2k+2)/(4m+2), weight 1/(2m+1)
inline double arcsine_riemann_sum(int m) {
    if (m < 1) throw config_error("arcsine_riemann_sum: m must be >= 1");
    double acc = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double x = (2.0 * k + 2) / (4.0 * m + 2);
        acc += 1.0 / std::sqrt(x * (1.0 - x));
    }
    return acc / (2 * m + 1);
}

// float diagnostic for the adjacent-class chain bound on -r_n at n = 4m:
// (2/N^2) sum_k n_{2k+1} mu_{2k+1} mu_{2k+3}. The label 2k+3 at k = m falls
// outside mu_1..mu_{2m+1}, so that term is dropped and flagged.
inline double chain_upper_diagnostic(int n) {
    if (n < 4 || n % 4 != 0)
        throw std::invalid_argument("chain_upper_diagnostic: n must be a positive multiple of 4");
    if (n > max_streaming_n)
        throw cap_error("chain_upper_diagnostic: n above " + std::to_string(max_streaming_n));
    const int m = n / 4;
    const std::vector<bigint> crow = binomial_row(n);
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
        const bigint cnt = detail::class_count(n, k, crow);
        acc += std::exp(log2_abs(cnt) * std::numbers::ln2 + detail::log_mu(m, k) +
                        detail::log_mu(m, k + 1) + std::numbers::ln2 -
                        2.0 * n * std::numbers::ln2);
    }
    return acc;
}

struct remainder_report {
    int n = 0;
    bool has_exact = false;
    bigrat r_exact;
    double r_float = 0.0;
    double sqrt_n_times_r = 0.0;
    double envelope_constant = 0.0;  // max over the enclosing scan; |own value| standalone
    std::string float_route;         // beta-loggamma | exact-downcast
    bool has_diagnostics = false;    // the n = 4m extras below
    double chain_diagnostic = 0.0;
    bool chain_truncated = true;
    double riemann_sum = 0.0;
    double riemann_gap = 0.0;
};

inline remainder_report make_remainder_report(int n) {
    remainder_report rep;
    rep.n = n;
    if (n <= max_exact_remainder_n) {
        rep.has_exact = true;
        rep.r_exact = remainder_exact(n);
    }
    rep.r_float = remainder_float(n);
    rep.float_route = n % 4 == 0 ? "beta-loggamma" : "exact-downcast";
    const double r = rep.has_exact ? to_double(rep.r_exact) : rep.r_float;
    rep.sqrt_n_times_r = std::sqrt(static_cast<double>(n)) * r;
    rep.envelope_constant = std::abs(rep.sqrt_n_times_r);
    if (n % 4 == 0 && n >= 4) {
        rep.has_diagnostics = true;
        rep.chain_diagnostic = chain_upper_diagnostic(n);
        rep.riemann_sum = arcsine_riemann_sum(n / 4);
        rep.riemann_gap = std::abs(rep.riemann_sum - std::numbers::pi / 2);
    }
    return rep;
}

inline std::vector<remainder_report> asymptotic_scan(const std::vector<int>& n_values) {
    std::vector<remainder_report> reports;
    reports.reserve(n_values.size());
    double envelope = 0.0;
    for (int n : n_values) {
        if (n > max_exact_remainder_n)
            throw cap_error("asymptotic_scan: entry above " + std::to_string(max_exact_remainder_n));
        reports.push_back(make_remainder_report(n));
        envelope = std::max(envelope, std::abs(reports.back().sqrt_n_times_r));
    }
    for (remainder_report& rep : reports) rep.envelope_constant = envelope;
    return reports;
}

// alternating row/column normalization toward doubly stochastic; returns the
// sweep count on convergence (max row/col sum deviation <= tol), -1 otherwise
inline int sinkhorn_balance(std::vector<std::vector<double>>& mat, double tol = sinkhorn_tolerance,
                            int max_sweeps = sinkhorn_max_sweeps) {
    const std::size_t q = mat.size();
    if (q == 0) throw std::invalid_argument("sinkhorn_balance: empty matrix");
    for (const auto& row : mat)
        if (row.size() != q) throw std::invalid_argument("sinkhorn_balance: matrix not square");
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < q; ++i) {
            double s = 0.0;
            for (double v : mat[i]) s += v;
            for (double& v : mat[i]) v /= s;
        }
        for (std::size_t j = 0; j < q; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < q; ++i) s += mat[i][j];
            for (std::size_t i = 0; i < q; ++i) mat[i][j] /= s;
        }
        double dev = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            double s = 0.0;
            for (double v : mat[i]) s += v;
            dev = std::max(dev, std::abs(s - 1.0));
        }
        for (std::size_t j = 0; j < q; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < q; ++i) s += mat[i][j];
            dev = std::max(dev, std::abs(s - 1.0));
        }
        if (dev <= tol) return sweep;
    }
    return -1;
}

struct birkhoff_report {
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
    int discarded = 0;  // Sinkhorn non-convergence within the sweep cap
    int max_sweeps_used = 0;
    double min_objective = 0.0;        // over converged doubly stochastic samples
    bigrat min_permutation_value;      // over 64 random permutation pairings
    bigrat r_exact;
    bool samples_above_remainder = false;      // every sample >= r_n - 1e-9
    bool permutations_above_remainder = false; // every pairing >= r_n, exact
};

// random doubly stochastic matrices never beat the rearrangement minimum, and
// neither do random permutation pairings; both facts checked by sampling
inline birkhoff_report birkhoff_sanity(int n, int trials, std::uint64_t seed) {
    if (n < 1 || n > max_birkhoff_n)
        throw cap_error("birkhoff_sanity: n out of [1, " + std::to_string(max_birkhoff_n) + "]");
    if (trials < 0) throw std::invalid_argument("birkhoff_sanity: negative trials");
    const eigenvalue_table tab = spectrum_summary(n);
    const bigrat r = rearrangement_min_pairing(tab);
    const std::size_t q = (std::size_t(1) << n) - 1;

    std::vector<std::int64_t> lam;
    lam.reserve(q);
    for (const spectrum_block& blk : tab.sorted_blocks) {
        const auto mult = blk.multiplicity.convert_to<std::int64_t>();
        for (std::int64_t t = 0; t < mult; ++t) lam.push_back(blk.value.convert_to<std::int64_t>());
    }

    birkhoff_report rep;
    rep.n = n;
    rep.trials = trials;
    rep.seed = seed;
    rep.r_exact = r;
    const double r_f = to_double(r);
    const double n2 = std::ldexp(1.0, 2 * n);

    splitmix64 rng(seed);
    bool first = true;
    bool all_above = true;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::vector<double>> mat(q, std::vector<double>(q));
        for (auto& row : mat)
            for (double& v : row) v = 0.05 + rng.unit();
        const int sweeps = sinkhorn_balance(mat);
        if (sweeps < 0) {
            ++rep.discarded;
            continue;
        }
        rep.max_sweeps_used = std::max(rep.max_sweeps_used, sweeps);
        double obj = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            double rowdot = 0.0;
            for (std::size_t j = 0; j < q; ++j) rowdot += mat[i][j] * static_cast<double>(lam[j]);
            obj += static_cast<double>(lam[i]) * rowdot;
        }
        obj /= n2;
        if (first || obj < rep.min_objective) rep.min_objective = obj;
        first = false;
        if (obj < r_f - 1e-9) all_above = false;
    }
    rep.samples_above_remainder = all_above;

    const bigint N2 = pow2(static_cast<unsigned>(2 * n));
    std::vector<std::uint32_t> perm(q);
    for (std::size_t i = 0; i < q; ++i) perm[i] = static_cast<std::uint32_t>(i);
    bool perms_above = true;
    bool pfirst = true;
    for (int t = 0; t < 64; ++t) {
        rng.shuffle(perm.begin(), perm.end());
        std::int64_t s = 0;
        for (std::size_t i = 0; i < q; ++i) s += lam[i] * lam[perm[i]];
        bigrat value(bigint(s), N2);
        if (value < r) perms_above = false;
        if (pfirst || value < rep.min_permutation_value) rep.min_permutation_value = value;
        pfirst = false;
    }
    rep.permutations_above_remainder = perms_above;
    return rep;
}

}
