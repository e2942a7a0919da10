// batch front end: subcommands wiring the library to CSV/JSON files.
// exit codes: 0 success, 1 verification failure, 2 cap or argument refusal.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <cubecorr/cubecorr.hpp>

using nlohmann::ordered_json;
using namespace cubecorr;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json jrat(const bigrat& q) {
    ordered_json o;
    o["num"] = numerator(q).str();
    o["den"] = denominator(q).str();
    return o;
}

void write_output(const std::string& out, const std::string& content) {
    if (out.empty() || out == "-") {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) throw config_error("cannot open output file: " + out);
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<int> parse_n_list(int n, const std::string& range) {
    std::vector<int> ns;
    if (!range.empty()) {
        if (n > 0) throw config_error("give either --n or --n-range, not both");
        int a = 0, b = 0, step = 1;
        const auto c1 = range.find(':');
        if (c1 == std::string::npos) throw config_error("--n-range must look like a:b or a:b:step");
        const auto c2 = range.find(':', c1 + 1);
        try {
            a = std::stoi(range.substr(0, c1));
            b = std::stoi(range.substr(c1 + 1, c2 == std::string::npos ? std::string::npos
                                                                       : c2 - c1 - 1));
            if (c2 != std::string::npos) step = std::stoi(range.substr(c2 + 1));
        } catch (const std::exception&) {
            throw config_error("--n-range must look like a:b or a:b:step");
        }
        if (a < 1 || b < a || step < 1) throw config_error("--n-range needs 1 <= a <= b, step >= 1");
        for (int v = a; v <= b; v += step) ns.push_back(v);
        return ns;
    }
    if (n < 1) throw config_error("--n (or --n-range) is required and must be >= 1");
    ns.push_back(n);
    return ns;
}

std::string spectrum_csv(const std::vector<int>& ns) {
    std::string out = "n,s,multiplicity,lambda_exact,lambda_float\n";
    for (int n : ns) {
        const eigenvalue_table tab = spectrum_summary(n);
        for (int s = 0; s <= n; ++s) {
            out += std::to_string(n);
            out += ',';
            out += std::to_string(s);
            out += ',';
            out += tab.mult_by_level[static_cast<std::size_t>(s)].str();
            out += ',';
            out += tab.lambda_by_level[static_cast<std::size_t>(s)].str();
            out += ',';
            out += fmt_double(to_double(tab.lambda_by_level[static_cast<std::size_t>(s)]));
            out += '\n';
        }
    }
    return out;
}

std::string spectrum_json(const std::vector<int>& ns) {
    ordered_json rows = ordered_json::array();
    for (int n : ns) {
        const eigenvalue_table tab = spectrum_summary(n);
        for (int s = 0; s <= n; ++s) {
            ordered_json row;
            row["n"] = n;
            row["s"] = s;
            row["multiplicity"] = tab.mult_by_level[static_cast<std::size_t>(s)].str();
            row["lambda_exact"] = tab.lambda_by_level[static_cast<std::size_t>(s)].str();
            row["lambda_float"] = to_double(tab.lambda_by_level[static_cast<std::size_t>(s)]);
            rows.push_back(std::move(row));
        }
    }
    return rows.dump(2) + "\n";
}

std::string remainder_csv(const std::vector<remainder_report>& reports) {
    std::string out = "n,r_num,r_den,r_float,sqrtn_r\n";
    for (const remainder_report& rep : reports) {
        out += std::to_string(rep.n);
        out += ',';
        out += numerator(rep.r_exact).str();
        out += ',';
        out += denominator(rep.r_exact).str();
        out += ',';
        out += fmt_double(rep.r_float);
        out += ',';
        out += fmt_double(rep.sqrt_n_times_r);
        out += '\n';
    }
    return out;
}

std::string remainder_json(const std::vector<remainder_report>& reports) {
    ordered_json summary;
    ordered_json entries = ordered_json::array();
    for (const remainder_report& rep : reports) {
        ordered_json e;
        e["n"] = rep.n;
        e["r"] = jrat(rep.r_exact);
        e["r_float"] = rep.r_float;
        e["sqrt_n_times_r"] = rep.sqrt_n_times_r;
        e["float_route"] = rep.float_route;
        if (rep.has_diagnostics) {
            ordered_json d;
            d["chain_diagnostic"] = rep.chain_diagnostic;
            d["chain_truncated"] = rep.chain_truncated;
            d["riemann_sum"] = rep.riemann_sum;
            d["riemann_gap"] = rep.riemann_gap;
            e["diagnostics"] = std::move(d);
        }
        entries.push_back(std::move(e));
    }
    summary["entries"] = std::move(entries);
    summary["envelope_constant"] = reports.empty() ? 0.0 : reports.front().envelope_constant;
    return summary.dump(2) + "\n";
}

ordered_json probe_json(const bijection_probe& p, bool emit_permutations) {
    ordered_json o;
    o["n"] = p.f.n;
    o["family"] = p.f.family;
    o["seed"] = p.f.seed;
    if (p.f.n <= 10 || emit_permutations) o["permutation"] = p.f.map;
    o["probability"] = jrat(p.probability);
    o["bound"] = jrat(p.bound);
    o["margin"] = jrat(p.margin);
    return o;
}

// ---- verify: bounded run of every module invariant, one line per check ----

struct verify_runner {
    int depth;
    bool all_passed = true;

    void check(const std::string& name, const std::function<void()>& body) {
        try {
            body();
            std::printf("[ok]   %s\n", name.c_str());
        } catch (const std::exception& e) {
            all_passed = false;
            std::printf("[FAIL] %s: %s\n", name.c_str(), e.what());
        }
    }

    static void expect(bool cond, const std::string& what) {
        if (!cond) throw integrity_error(what);
    }
};

int run_verify(int depth) {
    verify_runner v{std::clamp(depth, 1, 16)};
    const int d = v.depth;

    v.check("level routes agree (partial sum vs generating function)", [&] {
        for (int n = 1; n <= d; ++n) {
            const eigenvalue_table tab = spectrum_summary(n);
            verify_runner::expect(lambda_kraw_sum(n, 0) == tab.lambda_empty,
                                  "lambda(0) differs from the table");
            for (int s = 1; s <= n; ++s)
                verify_runner::expect(lambda_kraw_sum(n, s) == lambda_genfunc(n, s),
                                      "routes differ at n=" + std::to_string(n) +
                                          ", s=" + std::to_string(s));
        }
    });

    v.check("beta route at multiples of four", [&] {
        for (int n = 4; n <= d; n += 4)
            for (int s = 1; s <= n; ++s) {
                const double exact = to_double(lambda_genfunc(n, s));
                verify_runner::expect(std::abs(lambda_beta(n, s) - exact) <=
                                          1e-9 * std::max(1.0, std::abs(exact)),
                                      "beta route off at n=" + std::to_string(n));
            }
    });

    v.check("spectrum construction invariants (traces, blocks)", [&] {
        for (int n = 1; n <= d; ++n) {
            const eigenvalue_table tab = spectrum_summary(n);
            bigint mult = 0;
            for (const spectrum_block& blk : tab.sorted_blocks) mult += blk.multiplicity;
            verify_runner::expect(mult == pow2(static_cast<unsigned>(n)) - 1,
                                  "block multiplicities do not cover the nonempty levels");
        }
    });

    v.check("transform oracle matches the level formulas", [&] {
        for (int n = 1; n <= std::min(d, 14); ++n) {
            const std::vector<std::int64_t> eig = eigenvalues_via_wht(n);
            const eigenvalue_table tab = spectrum_summary(n);
            for (std::size_t mask = 0; mask < eig.size(); ++mask)
                verify_runner::expect(
                    bigint(eig[mask]) ==
                        tab.lambda_by_level[static_cast<std::size_t>(std::popcount(mask))],
                    "transform eigenvalue differs at n=" + std::to_string(n));
        }
    });

    v.check("frozen remainder values", [&] {
        verify_runner::expect(remainder_exact(1) == bigrat(1, 4), "r_1 != 1/4");
        verify_runner::expect(remainder_exact(2) == bigrat(-1, 16), "r_2 != -1/16");
        verify_runner::expect(remainder_exact(4) == bigrat(-25, 256), "r_4 != -25/256");
        verify_runner::expect(remainder_exact(8) == bigrat(-6345, 65536), "r_8 != -6345/65536");
    });

    v.check("grouped pairing equals the materialized reversal", [&] {
        for (int n = 1; n <= std::min(d, 14); ++n) {
            std::vector<bigint> values;
            for (int s = 1; s <= n; ++s) {
                const bigint lam = lambda_genfunc(n, s);
                const bigint mult = binomial(n, s);
                for (bigint t = 0; t < mult; ++t) values.push_back(lam);
            }
            std::sort(values.begin(), values.end(), std::greater<bigint>());
            bigint sum = 0;
            for (std::size_t i = 0; i < values.size(); ++i)
                sum += values[i] * values[values.size() - 1 - i];
            verify_runner::expect(
                remainder_exact(n) == bigrat(sum, pow2(static_cast<unsigned>(2 * n))),
                "pairings differ at n=" + std::to_string(n));
        }
    });

    v.check("distance-preserving probes sit on lambda_empty/N", [&] {
        for (int n = 1; n <= std::min(d, 8); ++n) {
            const eigenvalue_table tab = spectrum_summary(n);
            const bigrat expected(tab.lambda_empty, pow2(static_cast<unsigned>(n)));
            verify_runner::expect(joint_probability(n, identity_bijection(n)) == expected,
                                  "identity off at n=" + std::to_string(n));
            verify_runner::expect(joint_probability(n, random_isometry(n, 1)) == expected,
                                  "isometry off at n=" + std::to_string(n));
        }
    });

    v.check("probe margins nonnegative", [&] {
        for (int n = 1; n <= std::min(d, 8); ++n)
            for (std::uint64_t seed : {1ull, 2ull})
                verify_runner::expect(probe(random_bijection(n, seed)).margin >= 0,
                                      "margin negative at n=" + std::to_string(n));
    });

    v.check("conjugation structure exact", [&] {
        for (int n = 1; n <= std::min(d, 6); ++n) {
            conjugation_structure_report(n, identity_bijection(n));
            conjugation_structure_report(n, random_bijection(n, 3));
        }
    });

    v.check("exhaustive minima meet the bound chain", [&] {
        for (int n = 1; n <= 3; ++n) {
            const exhaustive_summary s = exhaustive_minimum(n);
            const bigrat quarter_chain = bigrat(1, 4) + remainder_exact(n);
            verify_runner::expect(s.minimum_probability >= s.bound,
                                  "minimum beats the spectral bound at n=" + std::to_string(n));
            verify_runner::expect(s.bound >= quarter_chain,
                                  "spectral bound under 1/4 + r at n=" + std::to_string(n));
        }
    });

    v.check("mu sequence classes (identification, ordering, count bound)", [&] {
        for (int m = 1; 4 * m <= std::max(d, 8); ++m) {
            const mu_sequence seq = make_mu_sequence(m);
            verify_runner::expect(seq.counts_within_binomial_bound,
                                  "count bound violated at m=" + std::to_string(m));
            if (!seq.counts_strictly_increasing)
                std::printf("[note] class count chain not monotone at m=%d (reported, "
                            "final class owns only the two middle levels)\n",
                            m);
        }
    });

    v.check("doubly stochastic floor", [&] {
        const birkhoff_report rep = birkhoff_sanity(3, 4, 0);
        verify_runner::expect(rep.discarded == 0, "sinkhorn discarded a sample");
        verify_runner::expect(rep.samples_above_remainder, "a sample fell under r_n");
        verify_runner::expect(rep.permutations_above_remainder, "a pairing fell under r_n");
    });

    v.check("r = 2 degeneration touches the pairing floor", [&] {
        for (int n : {2, 3}) {
            const r2_report rep = r2_consistency(spectrum_summary(n), 500, 0);
            verify_runner::expect(rep.reverse_attains && rep.min_equals_r && rep.never_below,
                                  "r2 consistency failed at n=" + std::to_string(n));
        }
    });

    v.check("latin square counts", [&] {
        const std::uint64_t expected[] = {1, 2, 12, 576};
        for (int q = 1; q <= 4; ++q)
            verify_runner::expect(latin_square_count(q) == expected[q - 1],
                                  "count off at order " + std::to_string(q));
    });

    v.check("tensor search exact at small orders", [&] {
        const tensor_instance inst = make_tensor_instance(spectrum_summary(2));
        double truth = 0.0;
        bool first = true;
        latin_square_enumerate(3, [&](const latin_square& L) {
            const double obj = tensor_objective(inst, L);
            if (first || obj < truth) truth = obj;
            first = false;
            return true;
        });
        const tensor_search_result res = tensor_min_search(inst, 0, 2, 50);
        verify_runner::expect(res.best_objective == truth, "search missed the enumerated minimum");
    });

    std::printf("%s\n", v.all_passed ? "verify: all checks passed" : "verify: FAILURES present");
    return v.all_passed ? 0 : 1;
}

}

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for hypercube bijection correlations"};
    app.require_subcommand(1);

    int n = 0;
    std::string n_range;
    std::uint64_t seed = 0;
    int trials = 8;
    int restarts = 8;
    std::uint64_t iters = 1000;
    std::string out;
    std::string format = "csv";
    bool include_lambda_empty = false;
    bool emit_permutations = false;
    std::string family = "identity";
    std::string mode;

    auto add_common = [&](CLI::App* sub, bool with_range) {
        sub->add_option("--n", n, "single n");
        if (with_range) sub->add_option("--n-range", n_range, "inclusive range a:b or a:b:step");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--trials", trials, "sampling trials");
        sub->add_option("--restarts", restarts, "search restarts");
        sub->add_option("--iters", iters, "search iteration budget per restart");
        sub->add_option("--out", out, "output path (default stdout)");
        sub->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--include-lambda-empty", include_lambda_empty,
                      "keep the principal eigenvalue in tensor instances");
        sub->add_flag("--emit-permutations", emit_permutations,
                      "emit permutation arrays above n = 10");
    };

    CLI::App* sub_spectrum = app.add_subcommand("spectrum", "eigenvalue table CSV/JSON");
    add_common(sub_spectrum, true);
    CLI::App* sub_remainder = app.add_subcommand("remainder", "r_n scan CSV or JSON summary");
    add_common(sub_remainder, true);
    CLI::App* sub_probe = app.add_subcommand("probe", "joint probability probe JSON");
    add_common(sub_probe, false);
    sub_probe->add_option("--family", family, "identity | complement | random")
        ->check(CLI::IsMember({"identity", "complement", "random"}));
    CLI::App* sub_search = app.add_subcommand("search", "worst-case bijection search JSON");
    add_common(sub_search, false);
    sub_search->add_option("--mode", mode, "exhaustive | local")
        ->check(CLI::IsMember({"exhaustive", "local"}));
    CLI::App* sub_verify = app.add_subcommand("verify", "bounded invariant suite");
    add_common(sub_verify, false);
    CLI::App* sub_tensor = app.add_subcommand("tensor", "Latin-square tensor search JSON");
    add_common(sub_tensor, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sub_spectrum->parsed()) {
            const std::vector<int> ns = parse_n_list(n, n_range);
            write_output(out, format == "json" ? spectrum_json(ns) : spectrum_csv(ns));
            return 0;
        }
        if (sub_remainder->parsed()) {
            const std::vector<remainder_report> reports = asymptotic_scan(parse_n_list(n, n_range));
            write_output(out, format == "json" ? remainder_json(reports) : remainder_csv(reports));
            return 0;
        }
        if (sub_probe->parsed()) {
            if (n < 1) throw config_error("probe: --n is required");
            bijection f;
            if (family == "identity") f = identity_bijection(n);
            else if (family == "complement") f = complement_bijection(n);
            else f = random_bijection(n, seed);
            write_output(out, probe_json(probe(f), emit_permutations).dump(2) + "\n");
            return 0;
        }
        if (sub_search->parsed()) {
            if (n < 1) throw config_error("search: --n is required");
            if (mode.empty()) mode = n <= max_exhaustive_n ? "exhaustive" : "local";
            const search_mode m =
                mode == "exhaustive" ? search_mode::exhaustive : search_mode::local_search;
            const search_result res = worst_case_search(n, m, seed, iters, restarts);
            ordered_json o = probe_json(res.best, emit_permutations);
            o["mode"] = mode;
            o["evaluated"] = res.evaluated;
            o["iters_used"] = res.iters_used;
            o["restarts"] = res.restarts;
            if (m == search_mode::exhaustive) {
                ordered_json counts = ordered_json::array();
                for (const bigint& c : res.distinct_counts) counts.push_back(c.str());
                o["distinct_counts"] = std::move(counts);
            }
            write_output(out, o.dump(2) + "\n");
            return 0;
        }
        if (sub_verify->parsed()) return run_verify(n < 1 ? 10 : n);
        if (sub_tensor->parsed()) {
            if (n < 1) throw config_error("tensor: --n is required");
            const tensor_instance inst =
                make_tensor_instance(spectrum_summary(n), include_lambda_empty);
            const tensor_search_result res = tensor_min_search(inst, seed, restarts, iters);
            ordered_json o;
            o["order"] = res.order;
            o["r"] = res.r;
            o["best_objective"] = res.best_objective;
            o["square"] = res.best.cells;
            o["restarts"] = res.restarts;
            o["iters"] = res.iters;
            o["seed"] = res.seed;
            write_output(out, o.dump(2) + "\n");
            return 0;
        }
    } catch (const cap_error& e) {
        std::fprintf(stderr, "refused: %s\n", e.what());
        return 2;
    } catch (const config_error& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const integrity_error& e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return 2;
    }
    return 0;
}
