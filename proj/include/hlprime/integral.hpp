// Archimedean densities for the counting problem:
//
//   I(tau)   = int_{[0,1]^n} e(sum_r tau_r F_r(v)) dv        (oscillatory)
//   J(L)     = int_{|tau| <= L} I(tau) dtau                  (truncated)
//   mu_infty = lim_{eps->0} vol{v : |F_r(v)| <= eps all r} / (2 eps)^R
//
// The shell estimator is the primary route; J(L) is kept as an independent
// oracle with |mu_infty - J(L)| = O(1/L) on the catalog systems.

#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hlprime/common.hpp"
#include "hlprime/polysys.hpp"

namespace hlprime {

struct OscEstimate {
    std::complex<double> value;
    double std_error = 0.0;  // scalar: sqrt(var_re + var_im) across rotations
    std::int64_t samples = 0;
};

struct JEstimate {
    double value = 0.0;
    double error = 0.0;  // quadrature refinement + inner-sample refinement
    double L = 0.0;
};

struct MuInftyEstimate {
    double value = 0.0;
    std::string method;               // "shell" or "oscillatory"
    std::vector<double> eps_schedule; // shell route
    double L = 0.0;                   // oscillatory route
    std::int64_t samples = 0;
    std::pair<double, double> confidence_interval{0.0, 0.0};
    bool zero_hit = false;
};

enum class RealVerdict { yes, unknown };

const char* to_string(RealVerdict v);

// quasi-Monte Carlo estimate of I(tau) on [0,1]^n, n <= 4; Halton points with
// seeded random rotations, standard error across the rotation replicates
OscEstimate oscillatory_I(const PolySystem& s, const std::vector<double>& tau,
                          std::int64_t samples = 1 << 17,
                          std::uint64_t seed = 1234,
                          work_budget& budget = default_budget());

// nested quadrature for J(L): composite Simpson over the tau box [-L, L]^R
// (R <= 2, larger R is refused toward the shell route), inner integral on a
// fixed Halton set shared by every tau node
JEstimate j_of_l(const PolySystem& s, double L,
                 work_budget& budget = default_budget());

// shell-volume estimator: sample [0,1]^n, count |F_r(v)| <= eps for every r,
// fit density(eps) = a + b eps over the schedule and report the intercept;
// 95% interval from 16 independent sample blocks
MuInftyEstimate shell_mu_infty(const PolySystem& s,
                               const std::vector<double>& eps_schedule,
                               std::int64_t samples, std::uint64_t seed = 99,
                               work_budget& budget = default_budget());

// wraps j_of_l in the estimate record (method = "oscillatory")
MuInftyEstimate mu_infty_oscillatory(const PolySystem& s, double L,
                                     work_budget& budget = default_budget());

// randomized search for a nonsingular real zero in the open unit cube:
// projected descent on sum_r F_r(v)^2 from many starts, then a Jacobian
// rank test through the spectrum of J J^T; yes is a certificate, unknown
// is only a failure to find one
RealVerdict real_nonsingular_check(const PolySystem& s,
                                   work_budget& budget = default_budget());

}  // namespace hlprime
