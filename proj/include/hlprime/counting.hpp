#pragma once

// Empirical counts: the von-Mangoldt-weighted solution count over [0,X]^n,
// the prime-log count, local solution counts over unit groups mod p^t, and
// integer-point counts over symmetric boxes.
//
//   M_f(X)  = sum over x in [0,X]^n, f(x) = 0, of Lambda(x_1)...Lambda(x_n)
//   M'_f(X) = sum over prime tuples of log(x_1)...log(x_n)
//   nu_t(p) = #{ x in units(p^t)^n : f(x) = 0 mod p^t }
//
// Enumeration only visits the Lambda-support (prime powers) per free
// coordinate; when a linear equation with an invertible coefficient exists,
// one coordinate is solved instead of enumerated.  nu_t uses the same idea
// mod p^t: solve a unit-coefficient linear equation, split the unit
// constraint by inclusion-exclusion, and fall back to enumeration only when
// no pivot exists.

#include <cstdint>
#include <string>

#include "hlprime/arith.hpp"
#include "hlprime/polysys.hpp"

namespace hlprime {

struct CountResult {
    std::int64_t X = 0;
    double weighted_sum = 0.0;
    std::int64_t raw_solutions = 0;  // tuples contributing nonzero weight
    std::string enumeration_strategy;
    double wall_seconds = 0.0;
};

// M_f(X); pt.limit() must be >= X
CountResult weighted_count(const PolySystem& s, std::int64_t X, const PrimeTable& pt,
                           const work_budget& budget = default_budget());
CountResult weighted_count(const PolySystem& s, std::int64_t X,
                           const work_budget& budget = default_budget());

// M'_f(X)
CountResult prime_log_count(const PolySystem& s, std::int64_t X, const PrimeTable& pt,
                            const work_budget& budget = default_budget());
CountResult prime_log_count(const PolySystem& s, std::int64_t X,
                            const work_budget& budget = default_budget());

// exact #solutions over units(p^t)^n of f = 0 mod p^t
std::int64_t nu_t(const PolySystem& s, std::int64_t p, int t,
                  const work_budget& budget = default_budget());

// |V(Z) cap [-X,X]^n|
std::int64_t integer_count(const PolySystem& s, std::int64_t X,
                           const work_budget& budget = default_budget());
// |V(Z) cap [0,X]^n|
std::int64_t integer_count_positive(const PolySystem& s, std::int64_t X,
                                    const work_budget& budget = default_budget());

}  // namespace hlprime
