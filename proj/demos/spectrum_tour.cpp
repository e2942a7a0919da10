// walk the exact machinery end to end at desk scale: eigenvalue levels, the
// grouped spectrum, the rearrangement remainder, and the resulting bound.

#include <cstdio>

#include <cubecorr/cubecorr.hpp>

using namespace cubecorr;

int main() {
    for (int n : {2, 4, 8}) {
        const eigenvalue_table tab = spectrum_summary(n);
        std::printf("n = %d: lambda_empty = %s, levels:", n, tab.lambda_empty.str().c_str());
        for (int s = 1; s <= n; ++s)
            std::printf(" %s", tab.lambda_by_level[static_cast<std::size_t>(s)].str().c_str());
        std::printf("\n  grouped blocks (value x multiplicity):");
        for (const spectrum_block& blk : tab.sorted_blocks)
            std::printf(" %s x%s", blk.value.str().c_str(), blk.multiplicity.str().c_str());
        const bigrat r = rearrangement_min_pairing(tab);
        const bigrat bound =
            bigrat(tab.lambda_empty * tab.lambda_empty, pow2(static_cast<unsigned>(2 * n))) + r;
        std::printf("\n  r_n = %s/%s, lower bound = %s/%s\n", numerator(r).str().c_str(),
                    denominator(r).str().c_str(), numerator(bound).str().c_str(),
                    denominator(bound).str().c_str());
    }

    std::printf("\nscaling scan (sqrt(n) * r_n should stay bounded):\n");
    for (const remainder_report& rep : asymptotic_scan({4, 16, 64, 256, 1024})) {
        std::printf("  n = %5d  r = %+.9f  sqrt(n)*r = %+.6f", rep.n, rep.r_float,
                    rep.sqrt_n_times_r);
        if (rep.has_diagnostics)
            std::printf("  riemann gap to pi/2 = %.6f", rep.riemann_gap);
        std::printf("\n");
    }
    return 0;
}
