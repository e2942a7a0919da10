// integration checks for the command-line tool; argv[1] is the binary path.
// plain main: prints one line per check and exits with the failure count.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

namespace {

struct run_result {
    int exit_code = -1;
    std::string out;
};

run_result run(const std::string& cmd) {
    run_result res;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

int failures = 0;

void check(bool ok, const std::string& name) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
    if (!ok) ++failures;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
        return 1;
    }
    const std::string cli = std::string("\"") + argv[1] + "\"";

    const run_result spectrum4 = run(cli + " spectrum --n 4");
    check(spectrum4.exit_code == 0 &&
              spectrum4.out == "n,s,multiplicity,lambda_exact,lambda_float\n"
                               "4,0,1,11,11\n"
                               "4,1,4,3,3\n"
                               "4,2,6,-1,-1\n"
                               "4,3,4,-1,-1\n"
                               "4,4,1,3,3\n",
          "spectrum --n 4 emits the exact frozen CSV");

    const run_result rem = run(cli + " remainder --n-range 2:16:2");
    check(rem.exit_code == 0 && rem.out.rfind("n,r_num,r_den,r_float,sqrtn_r\n", 0) == 0 &&
              contains(rem.out, "\n4,-25,256,") && contains(rem.out, "\n2,-1,16,"),
          "remainder CSV carries the header and r_4 = -25/256");

    const run_result remj = run(cli + " remainder --n-range 4:8:4 --format json");
    check(remj.exit_code == 0 && contains(remj.out, "\"envelope_constant\"") &&
              contains(remj.out, "\"riemann_sum\"") && contains(remj.out, "\"num\": \"-25\""),
          "remainder JSON summary has envelope constant and diagnostics");

    const run_result probe2 = run(cli + " probe --n 2");
    check(probe2.exit_code == 0 && contains(probe2.out, "\"family\": \"identity\"") &&
              contains(probe2.out, "\"num\": \"3\"") && contains(probe2.out, "\"den\": \"4\"") &&
              contains(probe2.out, "\"permutation\""),
          "probe --n 2 reports probability 3/4 with the permutation");

    const run_result probe11 = run(cli + " probe --n 11");
    check(probe11.exit_code == 0 && !contains(probe11.out, "\"permutation\""),
          "probe --n 11 omits the permutation array");
    const run_result probe11e = run(cli + " probe --n 11 --emit-permutations");
    check(probe11e.exit_code == 0 && contains(probe11e.out, "\"permutation\""),
          "probe --n 11 --emit-permutations includes it");

    const run_result search2 = run(cli + " search --n 2");
    check(search2.exit_code == 0 && contains(search2.out, "\"mode\": \"exhaustive\"") &&
              contains(search2.out, "\"evaluated\": 24") &&
              contains(search2.out, "\"distinct_counts\"") && contains(search2.out, "\"8\""),
          "search --n 2 runs exhaustively and reports distinct counts");

    const run_result search_cap = run(cli + " search --n 4 --mode exhaustive");
    check(search_cap.exit_code == 2, "exhaustive search above the cap refuses with exit 2");

    const run_result spectrum_cap = run(cli + " spectrum --n 5000");
    check(spectrum_cap.exit_code == 2, "spectrum above the exact cap refuses with exit 2");

    const run_result no_n = run(cli + " probe");
    check(no_n.exit_code == 2, "probe without --n refuses with exit 2");

    const run_result bad_flag = run(cli + " spectrum --n 4 --format yaml");
    check(bad_flag.exit_code != 0 && bad_flag.exit_code != 1 && bad_flag.exit_code != 2,
          "flag validation failures use the parser's own exit code");

    const run_result verify = run(cli + " verify");
    check(verify.exit_code == 0 && contains(verify.out, "all checks passed") &&
              !contains(verify.out, "[FAIL]"),
          "verify exits 0 with every check ok");

    const run_result tensor2 = run(cli + " tensor --n 2 --restarts 2 --iters 50");
    check(tensor2.exit_code == 0 && contains(tensor2.out, "\"order\": 3") &&
              contains(tensor2.out, "\"square\"") && contains(tensor2.out, "\"best_objective\""),
          "tensor --n 2 emits the search JSON");

    // byte stability: identical config and seed give identical bytes
    const char* stable_cmds[] = {
        " spectrum --n-range 1:6",
        " remainder --n-range 4:16:4 --format json",
        " probe --n 5 --family random --seed 11",
        " search --n 3 --mode local --seed 5 --iters 40 --restarts 3",
        " tensor --n 2 --seed 3 --restarts 2 --iters 50",
    };
    for (const char* cmd : stable_cmds) {
        const run_result a = run(cli + cmd);
        const run_result b = run(cli + cmd);
        check(a.exit_code == 0 && a.exit_code == b.exit_code && a.out == b.out && !a.out.empty(),
              std::string("byte-stable:") + cmd);
    }

    if (failures == 0) std::printf("cli integration: all checks passed\n");
    return failures;
}
