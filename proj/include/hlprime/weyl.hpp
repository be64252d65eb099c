#pragma once

// Multilinear differencing machinery at desk scale.  For a function G on n
// variables and l argument vectors x_1..x_l,
//
//     Gamma_{l,G}(x_1,...,x_l) = sum over t in {0,1}^l of
//                                (-1)^(t_1+...+t_l) G(t_1 x_1 + ... + t_l x_l)
//
// is symmetric, vanishes when any argument is zero, is additive in G, and is
// identically zero when deg G < l.  For a group of r degree-l forms the
// rank-deficiency variety M_l collects the (l-1)-tuples where the r x n
// matrix [Gamma_{l,U_r}(x_1,...,x_{l-1},e_i)] drops below rank r; counting
// its integer points in [-R0,R0] boxes and fitting the growth exponent gives
// the finite-radius surrogate for the exponent g_l and the derived constants
//
//     gamma_l  = 2^(l-1) (l-1) r_l / g_l,       gamma'_l = 2^(l-1) / g_l.

#include <cstdint>
#include <string>
#include <vector>

#include "hlprime/common.hpp"
#include "hlprime/polysys.hpp"
#include "hlprime/qmatrix.hpp"

namespace hlprime {

struct GammaEval {
    int ell = 0;
    std::vector<std::vector<std::int64_t>> points;
    mpq_class value;
};

// exact alternating 2^l-term sum; l = points.size() >= 1, each point length n
mpq_class gamma_operator(const Polynomial& G,
                         const std::vector<std::vector<std::int64_t>>& points);
GammaEval gamma_eval(const Polynomial& G,
                     const std::vector<std::vector<std::int64_t>>& points);

// Gamma_{l,G} expanded as a polynomial in the l*n tuple coordinates; variable
// i*n + j is the j-th coordinate of the i-th argument vector.
Polynomial gamma_polynomial(const Polynomial& G, int ell);

// r x n matrix [Gamma_{l,forms[r]}(tuple..., e_i)]; forms homogeneous of one
// degree l >= 2, tuple length l-1.  Integer forms give integer entries.
QMatrix m_matrix(const std::vector<Polynomial>& forms,
                 const std::vector<std::vector<std::int64_t>>& tuple);

// number of (l-1)-tuples with coordinates in [-R0,R0] whose m_matrix has rank
// strictly less than r; empty form list counts zero
std::int64_t z_count(const std::vector<Polynomial>& forms, std::int64_t R0,
                     const work_budget& budget = default_budget());

struct GFit {
    std::vector<std::int64_t> radii;
    std::vector<std::int64_t> counts;
    double fitted_g = 0.0;       // n(l-1) - fitted slope of log z against log R0
    bool g_infinite = false;     // z = 0 at every radius
    double gamma = 0.0;
    double gamma_prime = 0.0;
    std::string note;
};

// fits log z_count against log R0 over >= 3 radii; z identically zero gives
// the infinite-g sentinel and gamma = 0
GFit g_estimate(const std::vector<Polynomial>& forms,
                const std::vector<std::int64_t>& radii,
                const work_budget& budget = default_budget());

// Exact squaring check behind Weyl differencing: with S' = sum over x in
// [0,P]^n of e(G(x)),
//
//   |S'|^2 = sum over h in [-P,P]^n, x in [0,P]^n with x+h in [0,P]^n
//            of e(G(x+h) - G(x)),
//
// both sides computed independently.  Returns the residual |lhs - rhs|.
double differencing_identity_check(const Polynomial& G, std::int64_t P,
                                   const work_budget& budget = default_budget());

}  // namespace hlprime
