#pragma once

// Arithmetic local factors.  Over the unit tuples (U_q)^n the complete sums
//
//     S_{a,q} = sum over k in (U_q)^n of e( (a_1 f_1(k) + ... + a_R f_R(k)) / q ),
//     B(q)    = phi(q)^{-n} * sum of S_{a,q} over primitive a (gcd(a_1..a_R, q) = 1),
//
// feed the local density at a prime p in two ways that agree identically:
//
//     1 + sum_{j <= t} B(p^j)  =  p^{tR} nu_t(p) / phi(p^t)^n,
//
// where nu_t counts unit solutions mod p^t.  The limit over t is mu(p), the
// product over p <= p_max truncates the singular series.  B is multiplicative
// over coprime moduli.

#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hlprime/common.hpp"
#include "hlprime/polysys.hpp"

namespace hlprime {

// exact-phase complete sum; a must have R components
std::complex<double> gauss_sum(const PolySystem& s, const std::vector<std::int64_t>& a,
                               std::int64_t q, const work_budget& budget = default_budget());

// one histogram pass over the unit tuples, then a length-q transform per
// coefficient axis; imaginary part vanishes up to roundoff
std::complex<double> b_of_q(const PolySystem& s, std::int64_t q,
                            const work_budget& budget = default_budget());

struct LocalProfile {
    std::int64_t p = 0;
    struct Partial {
        int t = 0;
        std::int64_t nu = 0;            // nu_t(p)
        double nu_route = 0.0;          // p^{tR} nu_t / phi(p^t)^n
        double b_route = 0.0;           // 1 + sum_{j <= t} B(p^j)
        bool b_route_computed = false;  // false when the B route exceeded its budget
    };
    std::vector<Partial> partials;
    double mu_p = 0.0;
    int stabilized_at = -1;  // smallest t with v_t matching v_{t+1}; -1 = none
    bool obstruction = false;  // nu_t(p) = 0 observed, so mu(p) = 0 exactly
};

// Computes the nu_t route at t = 1, 2, ... and the B route alongside while it
// fits the budget; stops at the first confirmed stabilization (consecutive
// values within 1e-9), at an obstruction, at t_max, or when p^{t+1} leaves
// the modulus range.  Never throws for non-stabilization; the profile says so.
LocalProfile mu_p(const PolySystem& s, std::int64_t p, int t_max = 4,
                  const work_budget& budget = default_budget());

struct SingularData {
    double sigma_truncated = 1.0;  // product of mu(p) over p <= p_max
    double tail_bound = 0.0;       // heuristic |full product - truncation|
    std::int64_t p_max = 0;
    std::vector<std::int64_t> obstructions;           // primes with mu(p) = 0
    std::vector<std::pair<std::int64_t, double>> factors;  // (p, mu(p))
    // filled by the prediction layer, NaN until then
    double mu_infty = std::numeric_limits<double>::quiet_NaN();
    double c_f = std::numeric_limits<double>::quiet_NaN();
};

// truncated singular series; throws when some mu(p) fails to stabilize,
// naming the prime
SingularData sigma_truncated(const PolySystem& s, std::int64_t p_max, int t_max = 4,
                             const work_budget& budget = default_budget());

enum class HenselVerdict { yes, no, unknown };
const char* to_string(HenselVerdict v);

// yes: some unit tuple solves f = 0 mod p with Jacobian of full rank R
//      (Hensel lifts it, so mu(p) > 0);
// no: no unit tuple solves f = 0 mod p at all (then nu_t = 0 for every t
//     and mu(p) = 0);
// unknown: unit solutions exist mod p but all are singular.
HenselVerdict hensel_unit_check(const PolySystem& s, std::int64_t p,
                                const work_budget& budget = default_budget());

}  // namespace hlprime
