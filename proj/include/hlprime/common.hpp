#pragma once

// Shared error types, work budgets and deterministic parallel reduction.
//
// All long loops in the library go through work_budget checks before they
// start, so a call either refuses up front (budget_error, with the estimated
// cost attached) or runs to completion.  Floating point accumulations use
// fixed-chunk compensated summation: the chunk count depends only on the
// problem size, never on the thread count, so results are bit-identical
// across thread counts and runs.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hlprime {

// Input failed validation (bad dimensions, malformed JSON, non-integer
// coefficient, ...).  CLI maps this to exit code 2.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The requested computation exceeds the configured work budget.  Carries the
// estimate so callers can report it.  CLI maps this to exit code 3.
struct budget_error : std::runtime_error {
    double estimated_ops;
    double allowed_ops;
    budget_error(const std::string& what_arg, double est, double allowed)
        : std::runtime_error(what_arg + " (estimated cost " + std::to_string(est) +
                             " elementary operations, budget " + std::to_string(allowed) + ")"),
          estimated_ops(est), allowed_ops(allowed) {}
};

// Invariant violation inside the library itself.  CLI maps this to exit 4.
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

// ----------------------------------------------------------------------------
// work budget

struct work_budget {
    // elementary operations allowed for one call; the default is sized for a
    // few seconds of single-core work
    double max_ops = 2.0e8;

    void check(const std::string& op, double estimated) const {
        if (estimated > max_ops)
            throw budget_error(op + ": refusing, work estimate exceeds budget", estimated, max_ops);
    }
};

inline work_budget& default_budget() {
    static work_budget b;
    return b;
}

// ----------------------------------------------------------------------------
// threading

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Set the OpenMP thread count (no-op without OpenMP).
inline void set_threads(int t) {
#ifdef _OPENMP
    if (t > 0) omp_set_num_threads(t);
#else
    (void)t;
#endif
}

// ----------------------------------------------------------------------------
// compensated summation

// Kahan accumulator.  Used for every sum of von Mangoldt / log weights.
struct kahan_sum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

// Deterministic parallel sum of f(i) for i in [0,count).
//
// The range is split into a fixed number of chunks determined by the range
// alone; each chunk is summed with Kahan compensation and the per-chunk
// results are merged in chunk order, again compensated.  The result does not
// depend on the number of threads.
template <class F>
double chunked_sum(std::int64_t count, F&& f) {
    if (count <= 0) return 0.0;
    const std::int64_t chunks = count < 1024 ? count : 1024;
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        std::int64_t lo = count * ci / chunks;
        std::int64_t hi = count * (ci + 1) / chunks;
        kahan_sum ks;
        for (std::int64_t i = lo; i < hi; ++i) ks.add(f(i));
        partial[static_cast<std::size_t>(ci)] = ks.value();
    }
    kahan_sum total;
    for (double p : partial) total.add(p);
    return total.value();
}

// Deterministic parallel integer count of predicate hits on [0,count).
template <class F>
std::int64_t chunked_count(std::int64_t count, F&& pred) {
    if (count <= 0) return 0;
    const std::int64_t chunks = count < 1024 ? count : 1024;
    std::vector<std::int64_t> partial(static_cast<std::size_t>(chunks), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        std::int64_t lo = count * ci / chunks;
        std::int64_t hi = count * (ci + 1) / chunks;
        std::int64_t acc = 0;
        for (std::int64_t i = lo; i < hi; ++i)
            if (pred(i)) ++acc;
        partial[static_cast<std::size_t>(ci)] = acc;
    }
    std::int64_t total = 0;
    for (auto p : partial) total += p;
    return total;
}

}  // namespace hlprime
