#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cubecorr/combinatorics.hpp>
#include <cubecorr/oracle.hpp>
#include <vector>

using namespace cubecorr;

namespace {

bijection from_map(int n, std::vector<std::uint32_t> map) {
    bijection f;
    f.n = n;
    f.map = std::move(map);
    f.family = "test";
    return f;
}

// O(N^2) recount used as the reference against the incremental searcher
std::int64_t brute_count(int n, const std::vector<std::uint32_t>& map) {
    const std::uint32_t N = std::uint32_t(1) << n;
    const int h = n / 2;
    std::int64_t c = 0;
    for (std::uint32_t i = 0; i < N; ++i)
        for (std::uint32_t j = 0; j < N; ++j)
            if (std::popcount(i ^ j) <= h && std::popcount(map[i] ^ map[j]) <= h) ++c;
    return c;
}

}

TEST_CASE("walsh hadamard transform basics") {
    std::vector<std::int64_t> delta = {1, 0, 0, 0, 0, 0, 0, 0};
    wht_in_place(delta);
    CHECK(delta == std::vector<std::int64_t>(8, 1));

    std::vector<std::int64_t> ones(8, 1);
    wht_in_place(ones);
    CHECK(ones[0] == 8);
    for (std::size_t i = 1; i < 8; ++i) CHECK(ones[i] == 0);

    splitmix64 rng(11);
    std::vector<std::int64_t> data(64);
    for (auto& v : data) v = static_cast<std::int64_t>(rng.below(2001)) - 1000;
    std::vector<std::int64_t> twice = data;
    wht_in_place(twice);
    wht_in_place(twice);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(twice[i] == 64 * data[i]);

    std::vector<std::int64_t> bad(6, 1);
    CHECK_THROWS_AS(wht_in_place(bad), std::invalid_argument);
    std::vector<std::int64_t> empty;
    CHECK_THROWS_AS(wht_in_place(empty), std::invalid_argument);
}

TEST_CASE("half-space eigenvalues match the level formulas") {
    // frozen small case: masks of weight 0,1,1,2 at n = 2
    CHECK(eigenvalues_via_wht(2) == std::vector<std::int64_t>{3, 1, 1, -1});

    for (int n = 1; n <= 10; ++n) {
        const std::vector<std::int64_t> eig = eigenvalues_via_wht(n);
        std::vector<std::int64_t> by_level(n + 1);
        for (int s = 0; s <= n; ++s)
            by_level[s] = static_cast<std::int64_t>(lambda_kraw_sum(n, s));
        for (std::size_t mask = 0; mask < eig.size(); ++mask)
            REQUIRE(eig[mask] == by_level[std::popcount(mask)]);
    }

    for (int n : {12, 16, 20}) {
        const std::vector<std::int64_t> eig = eigenvalues_via_wht(n);
        splitmix64 rng(static_cast<std::uint64_t>(n));
        for (int t = 0; t < 64; ++t) {
            const std::size_t mask = static_cast<std::size_t>(rng.below(std::uint64_t(1) << n));
            REQUIRE(bigint(eig[mask]) == lambda_kraw_sum(n, std::popcount(mask)));
        }
    }

    CHECK_THROWS_AS(eigenvalues_via_wht(0), cap_error);
    CHECK_THROWS_AS(eigenvalues_via_wht(25), cap_error);
}

TEST_CASE("distance indicator spectrum is a Krawtchouk evaluation") {
    const int n = 6;
    for (int d = 0; d <= n; ++d) {
        const std::vector<std::int64_t> eig = distance_indicator_spectrum(n, d);
        for (std::size_t mask = 0; mask < eig.size(); ++mask)
            REQUIRE(bigint(eig[mask]) == krawtchouk(n, d, std::popcount(mask)));
    }
    // K_2 at n = 4: 6, 0, -2, 0, 6 over weights 0..4
    const std::vector<std::int64_t> eig = distance_indicator_spectrum(4, 2);
    CHECK(eig[0] == 6);
    CHECK(eig[1] == 0);
    CHECK(eig[3] == -2);
    CHECK(eig[7] == 0);
    CHECK(eig[15] == 6);
    CHECK_THROWS_AS(distance_indicator_spectrum(4, 5), std::invalid_argument);
    CHECK_THROWS_AS(distance_indicator_spectrum(0, 0), cap_error);
}

TEST_CASE("bijection constructors and validity") {
    for (int n : {1, 2, 5, 8}) {
        CHECK(is_valid(identity_bijection(n)));
        CHECK(is_valid(complement_bijection(n)));
        CHECK(is_valid(random_bijection(n, 42)));
        CHECK(is_valid(random_isometry(n, 42)));
    }
    const bijection comp2 = compose(complement_bijection(4), complement_bijection(4));
    CHECK(comp2.map == identity_bijection(4).map);

    const bijection r1 = random_bijection(5, 9);
    const bijection r2 = random_bijection(5, 9);
    CHECK(r1.map == r2.map);
    CHECK(r1.map != random_bijection(5, 10).map);

    const std::vector<int> rot = {1, 2, 0};
    const bijection rotated = coordinate_bijection(3, rot);
    for (std::uint32_t i = 0; i < 8; ++i)
        for (int b = 0; b < 3; ++b) REQUIRE((rotated.map[i] >> rot[b] & 1) == (i >> b & 1));
    const std::vector<int> dup = {0, 0, 2};
    CHECK_THROWS_AS(coordinate_bijection(3, dup), std::invalid_argument);
    const std::vector<int> shortp = {0, 1};
    CHECK_THROWS_AS(coordinate_bijection(3, shortp), std::invalid_argument);
    CHECK_THROWS_AS(identity_bijection(0), config_error);
    CHECK_THROWS_AS(identity_bijection(25), config_error);

    CHECK_FALSE(is_valid(from_map(2, {0, 1, 2})));      // wrong size
    CHECK_FALSE(is_valid(from_map(2, {0, 1, 2, 2})));   // repeat
    CHECK_FALSE(is_valid(from_map(2, {0, 1, 2, 4})));   // out of range
}

TEST_CASE("joint probability at small frozen cases") {
    const bijection id2 = identity_bijection(2);
    CHECK(joint_count(id2) == 12);
    CHECK(joint_probability(2, id2) == bigrat(3, 4));

    // n = 1 has exactly two bijections and both sit on the diagonal count
    CHECK(joint_probability(1, identity_bijection(1)) == bigrat(1, 2));
    CHECK(joint_probability(1, from_map(1, {1, 0})) == bigrat(1, 2));

    CHECK_THROWS_AS(joint_probability(3, id2), std::invalid_argument);
    CHECK_THROWS_AS(joint_count(from_map(2, {0, 1, 2, 2})), std::invalid_argument);
    CHECK_THROWS_AS(joint_count(identity_bijection(14)), cap_error);
}

TEST_CASE("distance preserving maps sit at the diagonal value") {
    for (int n = 1; n <= 6; ++n) {
        const eigenvalue_table tab = spectrum_summary(n);
        const bigrat expected(tab.lambda_empty, pow2(static_cast<unsigned>(n)));
        CHECK(joint_probability(n, identity_bijection(n)) == expected);
        CHECK(joint_probability(n, complement_bijection(n)) == expected);
        for (std::uint64_t seed : {1ull, 2ull, 3ull})
            REQUIRE(joint_probability(n, random_isometry(n, seed)) == expected);
    }
}

TEST_CASE("joint probability is invariant under isometry composition") {
    for (int n : {3, 4, 5}) {
        for (std::uint64_t seed : {5ull, 6ull}) {
            const bijection f = random_bijection(n, seed);
            const bigrat base = joint_probability(n, f);
            const bijection iso = random_isometry(n, seed + 100);
            REQUIRE(joint_probability(n, compose(iso, f)) == base);
            REQUIRE(joint_probability(n, compose(f, iso)) == base);
        }
    }
}

TEST_CASE("spectral route agrees with the exact count") {
    for (int n = 1; n <= 8; ++n) {
        std::vector<bijection> cases = {identity_bijection(n), complement_bijection(n)};
        for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) cases.push_back(random_bijection(n, seed));
        for (const bijection& f : cases) {
            const double exact = to_double(joint_probability(n, f));
            const double spectral = joint_probability_spectral(n, f);
            REQUIRE(std::abs(spectral - exact) <= 1e-9 * exact);
        }
    }
    const bijection f10 = random_bijection(10, 77);
    const double exact = to_double(joint_probability(10, f10));
    CHECK(std::abs(joint_probability_spectral(10, f10) - exact) <= 1e-9 * exact);
    CHECK_THROWS_AS(joint_probability_spectral(11, random_bijection(11, 0)), cap_error);
}

TEST_CASE("conjugated permutation structure is exact") {
    // every bijection of the 4-point square, checked exhaustively
    std::vector<std::uint32_t> map = {0, 1, 2, 3};
    do {
        const conjugation_report rep = conjugation_structure_report(2, from_map(2, map));
        REQUIRE(rep.r_empty_empty == 1.0);
        REQUIRE(rep.max_abs_empty_row == 0.0);
        REQUIRE(rep.max_abs_empty_col == 0.0);
        REQUIRE(rep.max_row_sum_dev == 0.0);
        REQUIRE(rep.max_col_sum_dev == 0.0);
        REQUIRE(rep.min_entry >= 0.0);
    } while (std::next_permutation(map.begin(), map.end()));

    for (std::uint64_t seed : {0ull, 1ull, 2ull, 3ull}) {
        const conjugation_report rep = conjugation_structure_report(3, random_bijection(3, seed));
        CHECK(rep.r_empty_empty == 1.0);
        CHECK(rep.max_row_sum_dev == 0.0);
        CHECK(rep.max_col_sum_dev == 0.0);
    }
    CHECK_THROWS_AS(conjugation_structure_report(2, from_map(2, {0, 1, 2, 2})),
                    std::invalid_argument);
    CHECK_THROWS_AS(conjugation_structure_report(11, identity_bijection(11)), cap_error);
}

TEST_CASE("probe reports a nonnegative margin against the spectral bound") {
    for (int n = 1; n <= 6; ++n) {
        const eigenvalue_table tab = spectrum_summary(n);
        const bigrat expected_bound =
            bigrat(tab.lambda_empty * tab.lambda_empty, pow2(static_cast<unsigned>(2 * n))) +
            remainder_exact(n);
        for (std::uint64_t seed : {10ull, 11ull, 12ull}) {
            const bijection_probe p = probe(random_bijection(n, seed));
            REQUIRE(p.bound == expected_bound);
            REQUIRE(p.margin >= 0);
            REQUIRE(p.probability == bigrat(p.favorable, pow2(static_cast<unsigned>(2 * n))));
            REQUIRE(std::isfinite(p.spectral_probability));
        }
    }
    // n = 4: 121/256 - 25/256 = 3/8
    CHECK(probe(identity_bijection(4)).bound == bigrat(3, 8));
    // n = 1: both bijections land exactly on the bound
    CHECK(probe(identity_bijection(1)).margin == 0);
    CHECK(probe(from_map(1, {1, 0})).margin == 0);
}

TEST_CASE("swap delta matches a full recount") {
    for (int n : {4, 6}) {
        const std::uint32_t N = std::uint32_t(1) << n;
        detail::swap_searcher st(n);
        std::vector<std::uint32_t> map(N);
        std::iota(map.begin(), map.end(), 0u);
        splitmix64 rng(static_cast<std::uint64_t>(n) * 31);
        rng.shuffle(map.begin(), map.end());
        st.load(map);
        REQUIRE(st.count == brute_count(n, map));
        for (int t = 0; t < 40; ++t) {
            const std::uint32_t a = static_cast<std::uint32_t>(rng.below(N));
            std::uint32_t b = static_cast<std::uint32_t>(rng.below(N));
            if (a == b) b = (b + 1) % N;
            std::vector<std::uint32_t> swapped = map;
            std::swap(swapped[a], swapped[b]);
            const std::int64_t expected = brute_count(n, swapped) - brute_count(n, map);
            REQUIRE(st.delta(a, b) == expected);
            st.apply(a, b);
            map = swapped;
            REQUIRE(st.count == brute_count(n, map));
        }
    }
}

TEST_CASE("exhaustive search freezes the small worst cases") {
    const exhaustive_summary s1 = exhaustive_minimum(1);
    CHECK(s1.minimum_probability == bigrat(1, 2));
    CHECK(s1.minimum_probability == s1.bound);
    CHECK(s1.distinct_counts == std::vector<bigint>{2});

    const exhaustive_summary s2 = exhaustive_minimum(2);
    CHECK(s2.minimum_count == 8);
    CHECK(s2.minimum_probability == bigrat(1, 2));
    CHECK(s2.minimum_probability == s2.bound);
    CHECK(s2.distinct_counts == std::vector<bigint>{8, 12});

    const search_result r2 = worst_case_search(2, search_mode::exhaustive, 0, 0);
    CHECK(r2.evaluated == 24);
    CHECK(r2.best.margin == 0);

    const exhaustive_summary s3 = exhaustive_minimum(3);
    CHECK(s3.minimum_count == 8);
    CHECK(s3.minimum_probability == bigrat(1, 8));
    CHECK(s3.minimum_probability == s3.bound);
    CHECK(s3.distinct_counts ==
          std::vector<bigint>{8, 12, 14, 16, 18, 20, 22, 24, 26, 28, 32});

    CHECK_THROWS_AS(worst_case_search(4, search_mode::exhaustive, 0, 0), cap_error);
}

TEST_CASE("local search is deterministic and beats the bound") {
    const search_result a = worst_case_search(3, search_mode::local_search, 7, 100);
    const search_result b = worst_case_search(3, search_mode::local_search, 7, 100);
    REQUIRE(a.best.f.map == b.best.f.map);
    REQUIRE(a.best.favorable == b.best.favorable);
    REQUIRE(a.iters_used == b.iters_used);
    CHECK(a.restarts == 8);

    // the descent reaches the exhaustive optimum on the 3-cube
    CHECK(a.best.probability == bigrat(1, 8));

    for (int n : {4, 5, 6}) {
        const search_result r = worst_case_search(n, search_mode::local_search, 3, 50, 4);
        CHECK(is_valid(r.best.f));
        CHECK(r.best.margin >= 0);
        CHECK(r.restarts == 4);
    }

    CHECK_THROWS_AS(worst_case_search(11, search_mode::local_search, 0, 10), cap_error);
    CHECK_THROWS_AS(worst_case_search(3, search_mode::local_search, 0, 10, 0),
                    std::invalid_argument);
}
