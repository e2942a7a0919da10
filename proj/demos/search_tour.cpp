// compare named bijections against the searched worst case on small cubes,
// then run the Latin-square tensor search on the n = 4 spectrum instance.

#include <cstdio>

#include <cubecorr/cubecorr.hpp>

using namespace cubecorr;

namespace {

void show(const char* label, const bijection_probe& p) {
    std::printf("  %-10s probability = %s/%s, margin over bound = %s/%s\n", label,
                numerator(p.probability).str().c_str(), denominator(p.probability).str().c_str(),
                numerator(p.margin).str().c_str(), denominator(p.margin).str().c_str());
}

}

int main() {
    for (int n : {2, 3}) {
        std::printf("n = %d\n", n);
        show("identity", probe(identity_bijection(n)));
        show("random", probe(random_bijection(n, 1)));
        const search_result ex = worst_case_search(n, search_mode::exhaustive, 0, 0);
        show("worst", ex.best);
        std::printf("  exhaustive sweep evaluated %llu permutations\n",
                    static_cast<unsigned long long>(ex.evaluated));
    }

    std::printf("n = 6 (descent)\n");
    const search_result local = worst_case_search(6, search_mode::local_search, 7, 200, 4);
    show("searched", local.best);

    const tensor_instance inst = make_tensor_instance(spectrum_summary(4));
    const tensor_search_result t = tensor_min_search(inst, 0, 4, 300);
    std::printf("tensor instance from n = 4: order %d square, best objective %.9f\n", t.order,
                t.best_objective);
    return 0;
}
