#include "hlprime/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace hlprime {

PrimeTable::PrimeTable(std::int64_t limit) : limit_(limit) {
    if (limit < 0) throw validation_error("PrimeTable: negative limit");
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    // linear sieve: every x is crossed once by its smallest prime factor
    for (std::int64_t x = 2; x <= limit; ++x) {
        if (spf_[x] == 0) {
            spf_[x] = static_cast<std::int32_t>(x);
            primes_.push_back(x);
        }
        for (std::int64_t p : primes_) {
            if (p > spf_[x] || x * p > limit) break;
            spf_[x * p] = static_cast<std::int32_t>(p);
        }
    }
}

bool PrimeTable::is_prime(std::int64_t x) const {
    if (x < 2 || x > limit_) return false;
    return spf_[static_cast<std::size_t>(x)] == x;
}

std::int64_t PrimeTable::spf(std::int64_t x) const {
    if (x < 2 || x > limit_) return 0;
    return spf_[static_cast<std::size_t>(x)];
}

std::int64_t PrimeTable::prime_power_base(std::int64_t x) const {
    if (x < 2) return 0;
    if (x > limit_) throw validation_error("PrimeTable: query above table limit");
    std::int64_t p = spf_[static_cast<std::size_t>(x)];
    while (x % p == 0) x /= p;
    return x == 1 ? p : 0;
}

double PrimeTable::von_mangoldt(std::int64_t x) const {
    std::int64_t p = prime_power_base(x);
    return p ? std::log(static_cast<double>(p)) : 0.0;
}

double PrimeTable::psi(std::int64_t X) const {
    if (X > limit_) throw validation_error("PrimeTable: psi above table limit");
    kahan_sum s;
    for (std::int64_t x = 2; x <= X; ++x) s.add(von_mangoldt(x));
    return s.value();
}

std::vector<std::pair<std::int64_t, double>> PrimeTable::lambda_support(std::int64_t X) const {
    if (X > limit_) throw validation_error("PrimeTable: support above table limit");
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::int64_t p : primes_) {
        if (p > X) break;
        double w = std::log(static_cast<double>(p));
        for (std::int64_t q = p; q <= X; q *= p) {
            out.emplace_back(q, w);
            if (q > X / p) break;  // q*p would overflow past X anyway
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<std::int64_t, double>> PrimeTable::prime_log_support(std::int64_t X) const {
    if (X > limit_) throw validation_error("PrimeTable: support above table limit");
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::int64_t p : primes_) {
        if (p > X) break;
        out.emplace_back(p, std::log(static_cast<double>(p)));
    }
    return out;
}

double von_mangoldt(const PrimeTable& pt, std::int64_t x) {
    if (x < 0) throw validation_error("von_mangoldt: negative argument");
    return pt.von_mangoldt(x);
}

std::int64_t euler_phi(std::int64_t q) {
    if (q < 1) throw validation_error("euler_phi: argument must be >= 1");
    std::int64_t result = q;
    for (std::int64_t p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            result -= result / p;
            while (q % p == 0) q /= p;
        }
    }
    if (q > 1) result -= result / q;
    return result;
}

std::vector<std::int64_t> units(std::int64_t q) {
    if (q < 1) throw validation_error("units: argument must be >= 1");
    if (q == 1) return {0};
    std::vector<std::int64_t> out;
    for (std::int64_t a = 1; a < q; ++a)
        if (std::gcd(a, q) == 1) out.push_back(a);
    return out;
}

std::complex<double> e_frac(std::int64_t m, std::int64_t q) {
    if (q == 0) throw validation_error("e_frac: zero modulus");
    if (q < 0) { m = -m; q = -q; }
    m %= q;
    if (m < 0) m += q;
    double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(q);
    return {std::cos(theta), std::sin(theta)};
}

}  // namespace hlprime
