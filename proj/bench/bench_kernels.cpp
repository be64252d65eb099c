// Timing comparison: production kernels (strategy selection, pivot recursion,
// histogram folding, OpenMP chunking) against the serial reference scans the
// tests certify them with.  Every row also re-checks agreement, so a speedup
// bought with a wrong answer shows up immediately.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hlprime/arith.hpp"
#include "hlprime/counting.hpp"
#include "hlprime/integral.hpp"
#include "hlprime/local.hpp"
#include "hlprime/reference.hpp"
#include "hlprime/weyl.hpp"

using namespace hlprime;

namespace {

Polynomial lin(int n, const std::vector<int>& c, long c0 = 0) {
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
        if (c[static_cast<std::size_t>(i)] == 0) continue;
        Exponents e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        p.add_term(e, c[static_cast<std::size_t>(i)]);
    }
    if (c0 != 0) p.add_term(Exponents(static_cast<std::size_t>(n), 0), c0);
    return p;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

void row(const char* name, double ref_ms, double lib_ms, bool agree) {
    std::printf("%-34s %10.2f ms %10.2f ms %8.1fx   %s\n", name, ref_ms, lib_ms,
                lib_ms > 0.0 ? ref_ms / lib_ms : 0.0, agree ? "agree" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("openmp disabled (serial build)\n\n");
#endif
    std::printf("%-34s %13s %13s %9s\n", "kernel", "reference", "production",
                "speedup");
    work_budget wb;
    wb.max_ops = 5.0e9;  // benchmarks may run hotter than the library default

    {
        // weighted count: full grid scan vs pivot strategy
        PolySystem s(3, {{1, lin(3, {1, 1, 1}, -301)}});
        PrimeTable pt(301);
        auto t0 = std::chrono::steady_clock::now();
        double ref = ref::weighted_count_grid(s, 301, pt);
        double ref_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        double lib = weighted_count(s, 301, pt, wb).weighted_sum;
        double lib_ms = ms_since(t0);
        row("weighted_count ternary X=301", ref_ms, lib_ms,
            std::abs(ref - lib) < 1e-6 * (1.0 + std::abs(ref)));
    }
    {
        // weighted count, quadratic system: grid scan vs support odometer
        Polynomial q(2);
        q.add_term({2, 0}, 1);
        q.add_term({0, 2}, 1);
        q.add_term({0, 0}, -1105);  // sum of two squares, several prime points
        PolySystem s(2, {{2, q}});
        PrimeTable pt(1105);
        auto t0 = std::chrono::steady_clock::now();
        double ref = ref::weighted_count_grid(s, 1105, pt);
        double ref_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        double lib = weighted_count(s, 1105, pt, wb).weighted_sum;
        double lib_ms = ms_since(t0);
        row("weighted_count quadratic X=1105", ref_ms, lib_ms,
            std::abs(ref - lib) < 1e-6 * (1.0 + std::abs(ref)));
    }
    {
        // unit-count nu_t: brute enumeration vs pivot recursion
        PolySystem s(3, {{1, lin(3, {1, 1, 1}, -11)}});
        auto t0 = std::chrono::steady_clock::now();
        std::int64_t ref = ref::nu_t_enum(s, 7, 3);
        double ref_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        std::int64_t lib = nu_t(s, 7, 3, wb);
        double lib_ms = ms_since(t0);
        row("nu_t ternary p=7 t=3", ref_ms, lib_ms, ref == lib);
    }
    {
        // complete sum S_{a,q}: direct double loop in both cases, but the
        // production path chunks the unit tuples for OpenMP
        PolySystem s(3, {{1, lin(3, {1, 1, 1}, -11)}});
        std::vector<std::int64_t> a{5};
        auto t0 = std::chrono::steady_clock::now();
        std::complex<double> ref = ref::gauss_sum_direct(s, a, 504);
        double ref_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        std::complex<double> lib = gauss_sum(s, a, 504, wb);
        double lib_ms = ms_since(t0);
        row("gauss_sum q=504", ref_ms, lib_ms, std::abs(ref - lib) < 1e-8);
    }
    {
        // B(q): primitive-residue average, direct vs value histogram
        PolySystem s(3, {{1, lin(3, {1, 1, 1}, -11)}});
        auto t0 = std::chrono::steady_clock::now();
        double ref = ref::b_of_q_direct(s, 120);
        double ref_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        double lib = b_of_q(s, 120, wb).real();
        double lib_ms = ms_since(t0);
        row("b_of_q q=120", ref_ms, lib_ms, std::abs(ref - lib) < 1e-8);
    }
    {
        // rank-deficient tuple scan: rational row reduction vs modular ranks
        Polynomial f(3), g(3);
        f.add_term({2, 0, 0}, 1);
        f.add_term({0, 1, 1}, 2);
        g.add_term({0, 2, 0}, 1);
        g.add_term({1, 0, 1}, -1);
        std::vector<Polynomial> forms{f, g};
        auto t0 = std::chrono::steady_clock::now();
        std::int64_t ref = ref::z_count_rational(forms, 8);
        double ref_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        std::int64_t lib = z_count(forms, 8, wb);
        double lib_ms = ms_since(t0);
        row("z_count quadratic pair R0=8", ref_ms, lib_ms, ref == lib);
    }
    return 0;
}
