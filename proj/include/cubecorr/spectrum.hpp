#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "combinatorics.hpp"
#include "errors.hpp"

namespace cubecorr {

struct spectrum_block {
    bigint value;
    bigint multiplicity;
};

// spectrum of the half-space matrix M = indicator of popcount(i^j) <= n/2,
// organized by level s = popcount(mask) and as sorted distinct-value blocks
struct eigenvalue_table {
    int n = 0;
    bigint lambda_empty;                  // eigenvalue on the constant character
    std::vector<bigint> lambda_by_level;  // s = 0..n
    std::vector<bigint> mult_by_level;    // C(n,s)
    std::vector<spectrum_block> sorted_blocks;  // nonempty levels, descending by value
};

// lambda(s) = sum_{d=0}^{floor(n/2)} K_d(s), the partial Krawtchouk sum
inline bigint lambda_kraw_sum(int n, int s) {
    if (n < 1 || n > max_streaming_n)
        throw config_error("lambda_kraw_sum: n out of [1, " + std::to_string(max_streaming_n) + "]");
    if (s < 0 || s > n) throw std::invalid_argument("lambda_kraw_sum: s out of [0, n]");
    const int h = n / 2;
    const std::vector<bigint> cs = binomial_row(s);
    const std::vector<bigint> cns = binomial_row(n - s);
    bigint acc = 0;
    for (int d = 0; d <= h; ++d) {
        const int jlo = std::max(0, d - (n - s));
        const int jhi = std::min(s, d);
        for (int j = jlo; j <= jhi; ++j) {
            bigint term = cs[j] * cns[d - j];
            if (j & 1) acc -= term;
            else acc += term;
        }
    }
    return acc;
}

// lambda(s) = [x^{floor(n/2)}] (1-x)^{s-1} (1+x)^{n-s}, expanded as the single
// alternating sum over products of two binomial rows
inline bigint lambda_genfunc(int n, int s) {
    if (n < 1 || n > max_streaming_n)
        throw config_error("lambda_genfunc: n out of [1, " + std::to_string(max_streaming_n) + "]");
    if (s < 1 || s > n)
        throw std::invalid_argument("lambda_genfunc: s must be in [1, n]");
    const int h = n / 2;
    const std::vector<bigint> a = binomial_row(s - 1, std::min(s - 1, h));
    const std::vector<bigint> b = binomial_row(n - s, std::min(n - s, h));
    bigint acc = 0;
    const int tlo = std::max(0, h - (n - s));
    const int thi = std::min(s - 1, h);
    for (int t = tlo; t <= thi; ++t) {
        bigint term = a[t] * b[h - t];
        if (t & 1) acc -= term;
        else acc += term;
    }
    return acc;
}

// closed form at n = 4m via the Beta function, evaluated in log space
inline double lambda_beta(int n, int s) {
    if (n < 4 || n % 4 != 0)
        throw std::invalid_argument("lambda_beta: n must be a positive multiple of 4");
    if (s < 1 || s > n) throw std::invalid_argument("lambda_beta: s out of [1, n]");
    double a, b;
    int sign;
    if (s % 2 == 0) {
        a = (s + 1) / 2.0;
        b = (n + 1 - s) / 2.0;
        sign = (s / 2) % 2 ? -1 : 1;
    } else {
        a = s / 2.0;
        b = (n + 2 - s) / 2.0;
        sign = ((s - 1) / 2) % 2 ? -1 : 1;
    }
    const double logv = (n - 1) * std::numbers::ln2 - std::log(std::numbers::pi) +
                        std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
    return sign * std::exp(logv);
}

// full spectrum in one pass: rolling Pascal rows give every level in O(n)
// bigint products total per level, so n = 4096 stays in seconds
inline eigenvalue_table spectrum_summary(int n) {
    if (n < 1) throw config_error("spectrum_summary: n must be >= 1");
    if (n > max_streaming_n)
        throw cap_error("spectrum_summary: n above " + std::to_string(max_streaming_n));
    const int h = n / 2;
    eigenvalue_table tab;
    tab.n = n;
    tab.mult_by_level = binomial_row(n);
    tab.lambda_by_level.assign(static_cast<std::size_t>(n) + 1, bigint{});

    bigint lam0 = 0;
    for (int d = 0; d <= h; ++d) lam0 += tab.mult_by_level[d];
    tab.lambda_by_level[0] = lam0;
    tab.lambda_empty = lam0;

    std::vector<bigint> rowA{bigint(1)};                  // C(s-1, .) capped at h
    std::vector<bigint> rowB = binomial_row(n - 1, h);    // C(n-s, .) capped at h
    for (int s = 1; s <= n; ++s) {
        const int tlo = std::max(0, h - (n - s));
        const int thi = std::min(s - 1, h);
        bigint lam = 0;
        for (int t = tlo; t <= thi; ++t) {
            bigint term = rowA[t] * rowB[h - t];
            if (t & 1) lam -= term;
            else lam += term;
        }
        tab.lambda_by_level[s] = std::move(lam);
        if (s == n) break;
        if (static_cast<int>(rowA.size()) <= std::min(s, h)) rowA.push_back(bigint(0));
        for (std::size_t t = rowA.size() - 1; t >= 1; --t) rowA[t] += rowA[t - 1];
        const int blen = std::min(n - s - 1, h);
        for (int j = 1; j <= blen; ++j) rowB[j] -= rowB[j - 1];
        rowB.resize(static_cast<std::size_t>(blen) + 1);
    }

    if (n >= 1 && tab.lambda_empty < pow2(static_cast<unsigned>(n - 1)))
        throw integrity_error("spectrum_summary: lambda_empty below 2^(n-1)");
    bigint tr = tab.lambda_by_level[0];
    bigint tr2 = tab.lambda_by_level[0] * tab.lambda_by_level[0];
    for (int s = 1; s <= n; ++s) {
        tr += tab.mult_by_level[s] * tab.lambda_by_level[s];
        tr2 += tab.mult_by_level[s] * tab.lambda_by_level[s] * tab.lambda_by_level[s];
    }
    if (tr != pow2(static_cast<unsigned>(n)))
        throw integrity_error("spectrum_summary: trace identity sum C(n,s) lambda(s) = 2^n failed");
    if (tr2 != pow2(static_cast<unsigned>(n)) * tab.lambda_empty)
        throw integrity_error("spectrum_summary: trace identity sum C(n,s) lambda(s)^2 = 2^n lambda_empty failed");

    std::map<bigint, bigint, std::greater<bigint>> merged;
    for (int s = 1; s <= n; ++s) merged[tab.lambda_by_level[s]] += tab.mult_by_level[s];
    bigint total = 0;
    tab.sorted_blocks.reserve(merged.size());
    for (auto& [value, mult] : merged) {
        tab.sorted_blocks.push_back({value, mult});
        total += mult;
    }
    if (total != pow2(static_cast<unsigned>(n)) - 1)
        throw integrity_error("spectrum_summary: block multiplicities do not sum to 2^n - 1");
    return tab;
}

// odd-labeled class 2k+1 of eigenvalue absolute values at n = 4m
struct mu_class {
    int k = 0;
    int sign = 1;             // common sign of the class eigenvalues, (-1)^k
    std::vector<int> levels;  // contributing levels s, ascending
    bigint abs_value;         // common |lambda| across the levels
    double mu = 0.0;
    bigint count;             // total multiplicity n_{2k+1}
};

struct mu_sequence {
    int m = 0;
    std::vector<mu_class> classes;  // k = 0..m, strictly decreasing abs_value
    bool counts_strictly_increasing = true;
    bool counts_within_binomial_bound = true;
    std::vector<std::string> notes;
};

namespace detail {

inline std::string format_rel(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}

// groups the n = 4m spectrum into the odd-labeled classes; identification or
// ordering failures throw, count-bound violations are reported in the fields
inline mu_sequence make_mu_sequence(int m) {
    if (m < 1 || 4 * m > max_streaming_n)
        throw config_error("make_mu_sequence: m out of [1, " + std::to_string(max_streaming_n / 4) + "]");
    const int n = 4 * m;
    const eigenvalue_table tab = spectrum_summary(n);
    mu_sequence seq;
    seq.m = m;
    std::vector<char> covered(static_cast<std::size_t>(n) + 1, 0);

    for (int k = 0; k <= m; ++k) {
        mu_class cls;
        cls.k = k;
        cls.sign = (k % 2 == 0) ? 1 : -1;
        int cand[4] = {2 * k, 2 * k + 1, n - 2 * k, n - 2 * k + 1};
        for (int lv : cand) {
            if (lv < 1 || lv > n) continue;
            if (std::find(cls.levels.begin(), cls.levels.end(), lv) == cls.levels.end())
                cls.levels.push_back(lv);
        }
        std::sort(cls.levels.begin(), cls.levels.end());
        const bigint& ref = tab.lambda_by_level[cls.levels.front()];
        cls.count = 0;
        for (int lv : cls.levels) {
            if (tab.lambda_by_level[lv] != ref)
                throw integrity_error("mu_sequence: lambda(" + std::to_string(lv) + ") != lambda(" +
                                      std::to_string(cls.levels.front()) + ") within class " +
                                      std::to_string(2 * k + 1));
            if (covered[lv])
                throw integrity_error("mu_sequence: level " + std::to_string(lv) +
                                      " assigned to two classes");
            covered[lv] = 1;
            cls.count += tab.mult_by_level[lv];
        }
        if ((cls.sign > 0 && ref <= 0) || (cls.sign < 0 && ref >= 0))
            throw integrity_error("mu_sequence: class " + std::to_string(2 * k + 1) +
                                  " has eigenvalue sign different from (-1)^k");
        cls.abs_value = ref < 0 ? bigint(-ref) : ref;
        cls.mu = to_double(cls.abs_value);
        seq.classes.push_back(std::move(cls));
    }
    for (int lv = 1; lv <= n; ++lv)
        if (!covered[lv])
            throw integrity_error("mu_sequence: level " + std::to_string(lv) + " not covered");

    for (std::size_t k = 0; k + 1 < seq.classes.size(); ++k) {
        if (seq.classes[k].abs_value <= seq.classes[k + 1].abs_value)
            throw integrity_error("mu_sequence: mu_" + std::to_string(2 * k + 1) +
                                  " not strictly above mu_" + std::to_string(2 * k + 3));
        if (seq.classes[k].count >= seq.classes[k + 1].count) {
            seq.counts_strictly_increasing = false;
            seq.notes.push_back("count ordering violated between classes " + std::to_string(2 * k + 1) +
                                " and " + std::to_string(2 * k + 3));
        }
    }
    for (const mu_class& cls : seq.classes) {
        if (cls.count >= 4 * binomial(n, 2 * cls.k + 1)) {
            seq.counts_within_binomial_bound = false;
            seq.notes.push_back("count bound n_" + std::to_string(2 * cls.k + 1) +
                                " < 4 C(4m, 2k+1) violated");
        }
    }

    // closed-form cross-check of the class values, both Beta parameterizations
    double err_primary = 0.0, err_variant = 0.0;
    for (const mu_class& cls : seq.classes) {
        const double log_exact = log2_abs(cls.abs_value) * std::numbers::ln2;
        const double a = (2 * cls.k + 1) / 2.0;
        const double base = (n - 1) * std::numbers::ln2 - std::log(std::numbers::pi);
        const double bp = (4.0 * m + 1 - 2 * cls.k) / 2.0;
        const double bv = (4.0 * m + 1 - cls.k) / 2.0;
        const double lp = base + std::lgamma(a) + std::lgamma(bp) - std::lgamma(a + bp);
        const double lv = base + std::lgamma(a) + std::lgamma(bv) - std::lgamma(a + bv);
        err_primary = std::max(err_primary, std::abs(std::expm1(lp - log_exact)));
        err_variant = std::max(err_variant, std::abs(std::expm1(lv - log_exact)));
    }
    seq.notes.push_back("class values match (2^(4m-1)/pi) B((2k+1)/2, (4m+1-2k)/2), max rel err " +
                        detail::format_rel(err_primary));
    if (err_variant > 1e-6)
        seq.notes.push_back("variant parameterization B((2k+1)/2, (4m+1-k)/2) does not reproduce the "
                            "class values, max rel err " + detail::format_rel(err_variant));
    return seq;
}

}
