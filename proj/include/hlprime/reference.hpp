#pragma once

// Serial brute-force oracles.  Each routine here scans the full grid with
// exact rational arithmetic and no algorithmic shortcuts; the optimized
// kernels are tested against these on small instances.

#include <complex>
#include <cstdint>

#include "hlprime/arith.hpp"
#include "hlprime/polysys.hpp"

namespace hlprime::ref {

// Lambda-weighted count over [0,X]^n, full grid scan
double weighted_count_grid(const PolySystem& s, std::int64_t X, const PrimeTable& pt);

// log-weighted count over prime tuples in [0,X]^n, full grid scan
double prime_log_count_grid(const PolySystem& s, std::int64_t X, const PrimeTable& pt);

// #solutions over units(p^t)^n of f = 0 mod p^t, plain enumeration
std::int64_t nu_t_enum(const PolySystem& s, std::int64_t p, int t);

// integer points in [-X,X]^n (or [0,X]^n) with f = 0, full grid scan
std::int64_t integer_count_grid(const PolySystem& s, std::int64_t X);
std::int64_t integer_count_grid_positive(const PolySystem& s, std::int64_t X);

// S_{a,q} = sum over unit tuples k of e((a . f(k)) / q), direct
std::complex<double> gauss_sum_direct(const PolySystem& s, const std::vector<std::int64_t>& a,
                                      std::int64_t q);

// rank-deficient tuple count over [-R0,R0] boxes via rational row reduction
std::int64_t z_count_rational(const std::vector<Polynomial>& forms, std::int64_t R0);

// phi(q)^{-n} * sum of S_{a,q} over primitive a (gcd(a_1..a_R, q) = 1)
double b_of_q_direct(const PolySystem& s, std::int64_t q);

}  // namespace hlprime::ref
