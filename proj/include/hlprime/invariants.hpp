#pragma once

// Rank and regularity invariants: Schmidt's rho function, Birch rank
// estimation (exact for linear groups, point-count dimension fit for
// degree >= 2), constructive h-invariant upper bounds, regularity verdicts
// against the rho thresholds, and empirical regularity scaling.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hlprime/polysys.hpp"

namespace hlprime {

// rho_{d,l}(t) = d * 2^{4l} * l! * t^2, checked 64-bit
std::int64_t rho(int d, int ell, std::int64_t t);

// Sentinel for "infinite rank" (empty form set at a degree).
constexpr double RANK_INFINITE = -1.0;  // stored flag; accessor exposes infinity

struct RankEstimate {
    int ell = 0;
    // estimated Birch rank of the degree-ell leading forms; infinite when
    // the group is empty (r_ell = 0, nothing to be singular)
    bool infinite = false;
    double value = 0.0;
    std::string method;      // "exact-linear", "pointcount-fit", "empty-group", "diagonal-exact"
    std::string confidence;  // "exact" or "heuristic"
    // point counts per probe prime when the fit method ran
    std::vector<std::pair<std::int64_t, std::int64_t>> probe_counts;
};

// Birch rank of the degree-ell leading forms of s.
//   ell = 1: exact minimum number of nonzero coefficients over nontrivial
//            rational combinations of the linear forms.
//   ell >= 2: codimension of the singular locus V*_ell, estimated by
//            counting F_p points of V* for the probe primes and fitting
//            log count against log p; heuristic.
// Empty group at ell: infinite rank.
RankEstimate birch_rank_estimate(const PolySystem& s, int ell,
                                 const std::vector<std::int64_t>& probe_primes = {101, 103, 107},
                                 const work_budget& budget = default_budget());

// Constructive upper bound on the h-invariant of a homogeneous form:
// number of groups in a greedy decomposition U = sum_i x_{v_i} * V_i,
// grouping monomials by their lowest-index variable.  0 for the zero form.
int h_upper_bound(const Polynomial& form);

struct RegularityVerdict {
    bool satisfied = false;  // true: thresholds certified; false: not verifiable
    std::string detail;
    struct PerDegree {
        int ell;
        std::int64_t threshold;       // required h_ell
        double achieved_lower_bound;  // 2^{1-ell} * B_ell estimate
        bool ok;
        std::string note;
    };
    std::vector<PerDegree> degrees;
};

// Checks the sufficient regularity condition degree by degree: the verdict
// is "satisfied" when every degree's certified lower bound 2^{1-l} * B_l
// meets the rho-derived threshold, otherwise "not verifiable at these
// thresholds".  Never claims irregularity.
RegularityVerdict regularity_verdict(const PolySystem& s,
                                     const work_budget& budget = default_budget());

struct EmpiricalRegularity {
    std::vector<std::int64_t> xs;
    std::vector<std::int64_t> counts;  // |V(Z) cap [-X,X]^n|
    double slope = 0.0;                // fitted d log count / d log X
    double expected = 0.0;             // n - D
    bool degenerate = false;           // counts identically zero or constant zero
};

// Integer-point growth exponent over symmetric boxes, fitted log-log.
EmpiricalRegularity empirical_regularity(const PolySystem& s, const std::vector<std::int64_t>& xs,
                                         const work_budget& budget = default_budget());

}  // namespace hlprime
