#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "remainder.hpp"
#include "rng.hpp"
#include "spectrum.hpp"

namespace cubecorr {

inline constexpr int max_latin_enumeration_order = 5;
inline constexpr int max_latin_search_order = 64;
inline constexpr int max_r2_n = 10;

struct latin_square {
    int order = 0;
    std::vector<std::vector<int>> cells;
};

inline bool is_latin(const latin_square& L) {
    const int q = L.order;
    if (q < 1 || static_cast<int>(L.cells.size()) != q) return false;
    for (int r = 0; r < q; ++r) {
        if (static_cast<int>(L.cells[r].size()) != q) return false;
        std::uint64_t seen = 0;
        for (int c = 0; c < q; ++c) {
            const int v = L.cells[r][c];
            if (v < 0 || v >= q || (seen >> v & 1)) return false;
            seen |= std::uint64_t(1) << v;
        }
    }
    for (int c = 0; c < q; ++c) {
        std::uint64_t seen = 0;
        for (int r = 0; r < q; ++r) {
            const int v = L.cells[r][c];
            if (seen >> v & 1) return false;
            seen |= std::uint64_t(1) << v;
        }
    }
    return true;
}

// visits every Latin square of order q exactly once (row-major backtracking
// over column masks); the visitor returns false to stop the stream
template <typename Visitor>
void latin_square_enumerate(int q, Visitor&& visit) {
    if (q < 1) throw config_error("latin_square_enumerate: order must be >= 1");
    if (q > max_latin_enumeration_order)
        throw cap_error("latin_square_enumerate: order above " +
                        std::to_string(max_latin_enumeration_order) + " refused");
    latin_square L;
    L.order = q;
    L.cells.assign(q, std::vector<int>(q, -1));
    std::vector<std::uint32_t> colmask(q, 0);
    std::vector<std::uint32_t> rowmask(q, 0);
    const std::uint32_t full = (std::uint32_t(1) << q) - 1;
    bool stop = false;
    auto rec = [&](auto&& self, int cell) -> void {
        if (stop) return;
        if (cell == q * q) {
            if (!visit(const_cast<const latin_square&>(L))) stop = true;
            return;
        }
        const int r = cell / q, c = cell % q;
        std::uint32_t avail = full & ~(rowmask[r] | colmask[c]);
        while (avail && !stop) {
            const int v = std::countr_zero(avail);
            avail &= avail - 1;
            L.cells[r][c] = v;
            rowmask[r] |= std::uint32_t(1) << v;
            colmask[c] |= std::uint32_t(1) << v;
            self(self, cell + 1);
            rowmask[r] &= ~(std::uint32_t(1) << v);
            colmask[c] &= ~(std::uint32_t(1) << v);
            L.cells[r][c] = -1;
        }
    };
    rec(rec, 0);
}

inline std::uint64_t latin_square_count(int q) {
    std::uint64_t count = 0;
    latin_square_enumerate(q, [&](const latin_square&) {
        ++count;
        return true;
    });
    return count;
}

// random Latin square, one row at a time: each new row is a random perfect
// matching between columns and their still-unused symbols (the availability
// graph is regular, so a matching always exists), found by augmenting paths
// over shuffled adjacency; naive in-row backtracking stalls near order 30
inline latin_square random_latin_square(int q, splitmix64& rng) {
    if (q < 1 || q > max_latin_search_order)
        throw config_error("random_latin_square: order out of [1, " +
                           std::to_string(max_latin_search_order) + "]");
    latin_square L;
    L.order = q;
    L.cells.assign(q, std::vector<int>(q, -1));
    std::vector<std::uint64_t> colmask(q, 0);
    std::vector<std::vector<int>> avail(q);
    std::vector<int> owner(q);  // symbol -> column holding it in this row
    std::vector<char> visited(q);
    std::vector<int> cols(q);
    for (int r = 0; r < q; ++r) {
        for (int c = 0; c < q; ++c) {
            avail[c].clear();
            for (int v = 0; v < q; ++v)
                if (!(colmask[c] >> v & 1)) avail[c].push_back(v);
            rng.shuffle(avail[c].begin(), avail[c].end());
        }
        std::fill(owner.begin(), owner.end(), -1);
        auto augment = [&](auto&& self, int c) -> bool {
            for (int v : avail[c]) {
                if (visited[v]) continue;
                visited[v] = 1;
                if (owner[v] < 0 || self(self, owner[v])) {
                    owner[v] = c;
                    return true;
                }
            }
            return false;
        };
        std::iota(cols.begin(), cols.end(), 0);
        rng.shuffle(cols.begin(), cols.end());
        for (int c : cols) {
            std::fill(visited.begin(), visited.end(), 0);
            if (!augment(augment, c))
                throw integrity_error("random_latin_square: row extension has no matching");
        }
        for (int v = 0; v < q; ++v) {
            L.cells[r][owner[v]] = v;
            colmask[owner[v]] |= std::uint64_t(1) << v;
        }
    }
    return L;
}

struct tensor_instance {
    std::vector<double> lambda;
    double scale = 1.0;  // objective divisor; N^3 when built from a spectrum
    int r = 3;
};

// lambda expanded from the sorted blocks, principal eigenvalue excluded by
// default (the dominant (1/2)^r term it carries is the part already split off
// of the r = 3 objective); flag includes it for comparison runs
inline tensor_instance make_tensor_instance(const eigenvalue_table& tab,
                                            bool include_lambda_empty = false) {
    const int order_target = (1 << tab.n) - (include_lambda_empty ? 0 : 1);
    if (order_target > max_latin_search_order)
        throw cap_error("make_tensor_instance: expanded order above " +
                        std::to_string(max_latin_search_order));
    tensor_instance inst;
    inst.r = 3;
    inst.scale = std::ldexp(1.0, 3 * tab.n);
    if (include_lambda_empty) inst.lambda.push_back(to_double(tab.lambda_empty));
    for (const spectrum_block& blk : tab.sorted_blocks) {
        const auto mult = blk.multiplicity.convert_to<std::int64_t>();
        for (std::int64_t t = 0; t < mult; ++t) inst.lambda.push_back(to_double(blk.value));
    }
    return inst;
}

inline double tensor_objective(const tensor_instance& inst, const latin_square& L) {
    if (L.order != static_cast<int>(inst.lambda.size()))
        throw std::invalid_argument("tensor_objective: order does not match lambda length");
    double acc = 0.0;
    for (int i = 0; i < L.order; ++i) {
        double rowacc = 0.0;
        for (int j = 0; j < L.order; ++j) rowacc += inst.lambda[j] * inst.lambda[L.cells[i][j]];
        acc += inst.lambda[i] * rowacc;
    }
    return acc / inst.scale;
}

struct tensor_search_result {
    int order = 0;
    int r = 3;
    double best_objective = 0.0;
    latin_square best;
    int restarts = 0;
    std::uint64_t iters = 0;
    std::uint64_t seed = 0;
};

// minimization over Latin squares: orders the enumerator covers are solved
// exactly; larger orders run a seeded best-improvement descent over row swaps
// and intercalate flips, which can otherwise strand in a local minimum even
// at order 5
inline tensor_search_result tensor_min_search(const tensor_instance& inst, std::uint64_t seed,
                                              int restarts, std::uint64_t iters) {
    const int q = static_cast<int>(inst.lambda.size());
    if (q < 1 || q > max_latin_search_order)
        throw config_error("tensor_min_search: order out of [1, " +
                           std::to_string(max_latin_search_order) + "]");
    if (restarts < 1) throw std::invalid_argument("tensor_min_search: restarts must be >= 1");
    tensor_search_result res;
    res.order = q;
    res.r = inst.r;
    res.restarts = restarts;
    res.seed = seed;
    if (q <= max_latin_enumeration_order) {
        bool first = true;
        latin_square_enumerate(q, [&](const latin_square& L) {
            const double obj = tensor_objective(inst, L);
            if (first || obj < res.best_objective) {
                res.best_objective = obj;
                res.best = L;
            }
            first = false;
            return true;
        });
        return res;
    }
    splitmix64 rng(seed);
    const std::vector<double>& lam = inst.lambda;
    bool first = true;
    for (int rs = 0; rs < restarts; ++rs) {
        latin_square L = random_latin_square(q, rng);
        std::uint64_t budget = iters;
        while (budget > 0) {
            double best_delta = 0.0;
            int kind = -1;  // 0: row swap, 1: intercalate flip
            int m0 = 0, m1 = 0, m2 = 0, m3 = 0;
            for (int r1 = 0; r1 + 1 < q; ++r1)
                for (int r2 = r1 + 1; r2 < q; ++r2) {
                    double d = 0.0;
                    for (int j = 0; j < q; ++j)
                        d += lam[j] * (lam[L.cells[r2][j]] - lam[L.cells[r1][j]]);
                    d *= lam[r1] - lam[r2];
                    if (d < best_delta) {
                        best_delta = d;
                        kind = 0;
                        m0 = r1;
                        m1 = r2;
                    }
                }
            std::vector<int> col_of(q);
            for (int r1 = 0; r1 < q; ++r1)
                for (int r2 = 0; r2 < q; ++r2) {
                    if (r1 == r2) continue;
                    for (int c = 0; c < q; ++c) col_of[L.cells[r1][c]] = c;
                    for (int c1 = 0; c1 < q; ++c1) {
                        const int x = L.cells[r1][c1];
                        const int y = L.cells[r2][c1];
                        const int c2 = col_of[y];
                        if (c2 <= c1) continue;
                        if (L.cells[r2][c2] != x) continue;
                        const double d = (lam[y] - lam[x]) * (lam[r1] - lam[r2]) *
                                         (lam[c1] - lam[c2]);
                        if (d < best_delta) {
                            best_delta = d;
                            kind = 1;
                            m0 = r1;
                            m1 = r2;
                            m2 = c1;
                            m3 = c2;
                        }
                    }
                }
            if (kind < 0) break;
            if (kind == 0) {
                std::swap(L.cells[m0], L.cells[m1]);
            } else {
                std::swap(L.cells[m0][m2], L.cells[m0][m3]);
                std::swap(L.cells[m1][m2], L.cells[m1][m3]);
            }
            ++res.iters;
            --budget;
        }
        const double obj = tensor_objective(inst, L);
        if (first || obj < res.best_objective) {
            res.best_objective = obj;
            res.best = std::move(L);
        }
        first = false;
    }
    if (!is_latin(res.best))
        throw integrity_error("tensor_min_search: produced square lost the Latin property");
    return res;
}

struct r2_report {
    int n = 0;
    bigrat r_exact;
    bigrat sampled_min;      // over sampled pairings and the reverse pairing
    bool reverse_attains = false;
    bool min_equals_r = false;
    bool never_below = false;  // no sampled pairing under r_exact
    int samples = 0;
    std::uint64_t seed = 0;
};

// r = 2 degeneration: random permutation pairings of the nonprincipal
// spectrum never undercut the reverse pairing, which equals r_n
inline r2_report r2_consistency(const eigenvalue_table& tab, int samples = 10000,
                                std::uint64_t seed = 0) {
    if (tab.n < 1 || tab.n > max_r2_n)
        throw cap_error("r2_consistency: n out of [1, " + std::to_string(max_r2_n) + "]");
    r2_report rep;
    rep.n = tab.n;
    rep.samples = samples;
    rep.seed = seed;
    rep.r_exact = rearrangement_min_pairing(tab);
    const std::size_t q = (std::size_t(1) << tab.n) - 1;
    std::vector<std::int64_t> lam;
    lam.reserve(q);
    for (const spectrum_block& blk : tab.sorted_blocks) {
        const auto mult = blk.multiplicity.convert_to<std::int64_t>();
        for (std::int64_t t = 0; t < mult; ++t) lam.push_back(blk.value.convert_to<std::int64_t>());
    }
    const bigint N2 = pow2(static_cast<unsigned>(2 * tab.n));
    std::int64_t rev = 0;
    for (std::size_t i = 0; i < q; ++i) rev += lam[i] * lam[q - 1 - i];
    const bigrat rev_value(bigint(rev), N2);
    rep.reverse_attains = rev_value == rep.r_exact;
    rep.sampled_min = rev_value;
    rep.never_below = true;
    splitmix64 rng(seed);
    std::vector<std::uint32_t> perm(q);
    for (std::size_t i = 0; i < q; ++i) perm[i] = static_cast<std::uint32_t>(i);
    for (int t = 0; t < samples; ++t) {
        rng.shuffle(perm.begin(), perm.end());
        std::int64_t s = 0;
        for (std::size_t i = 0; i < q; ++i) s += lam[i] * lam[perm[i]];
        const bigrat value(bigint(s), N2);
        if (value < rep.sampled_min) rep.sampled_min = value;
        if (value < rep.r_exact) rep.never_below = false;
    }
    rep.min_equals_r = rep.sampled_min == rep.r_exact;
    return rep;
}

}
