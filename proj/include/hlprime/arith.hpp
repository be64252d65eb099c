#pragma once

// Number-theoretic kernels: sieve, von Mangoldt weights, Euler phi, unit
// groups and roots of unity.
//
//   Lambda(x) = log p   if x = p^k for a prime p and k >= 1,
//             = 0       otherwise, with Lambda(0) = Lambda(1) = 0.
//
// The prime table is built once (linear sieve storing the smallest prime
// factor) and then shared read-only.

#include <complex>
#include <cstdint>
#include <vector>

#include "hlprime/common.hpp"

namespace hlprime {

class PrimeTable {
  public:
    explicit PrimeTable(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    bool is_prime(std::int64_t x) const;
    // smallest prime factor; 0 for x < 2
    std::int64_t spf(std::int64_t x) const;
    const std::vector<std::int64_t>& primes() const { return primes_; }

    // log p if x is a prime power p^k, else 0; Lambda(0) = Lambda(1) = 0
    double von_mangoldt(std::int64_t x) const;
    // p if x = p^k, else 0
    std::int64_t prime_power_base(std::int64_t x) const;

    // Chebyshev psi(X) = sum of Lambda over [0,X], compensated
    double psi(std::int64_t X) const;

    // all x in [0,X] with Lambda(x) > 0, paired with the weight
    std::vector<std::pair<std::int64_t, double>> lambda_support(std::int64_t X) const;
    // all primes in [0,X] paired with log x
    std::vector<std::pair<std::int64_t, double>> prime_log_support(std::int64_t X) const;

  private:
    std::int64_t limit_;
    std::vector<std::int32_t> spf_;  // spf_[x] = smallest prime factor of x
    std::vector<std::int64_t> primes_;
};

double von_mangoldt(const PrimeTable& pt, std::int64_t x);

// multiplicative totient, phi(1) = 1; trial division, no table needed
std::int64_t euler_phi(std::int64_t q);

// Ascending residues coprime to q.  Convention: units(1) = {0}, the unit
// group mod 1 being trivial.
std::vector<std::int64_t> units(std::int64_t q);

// e^{2 pi i (m mod q)/q}; the argument is reduced mod q before any trig so
// large m lose no precision
std::complex<double> e_frac(std::int64_t m, std::int64_t q);

}  // namespace hlprime
