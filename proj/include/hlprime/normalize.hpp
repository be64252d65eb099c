#pragma once

// Normal-form reduction of a polynomial system: the linear group is brought
// to reduced row echelon form and its pivot variables substituted out of
// every higher-degree polynomial; then degree by degree the leading forms
// are row-reduced over the degree-l monomials (decreasing graded-lex) and
// lower-degree leading monomials are eliminated by Groebner-style reduction.
// The result decomposes each polynomial as
//
//     f_{l,r} = c_{l,r} * w^{j_{l,r}} + chi_{l,r} + ftilde_{l,r}
//
// with distinct leading monomials, no cross-degree divisibility, and chi and
// ftilde free of every leading monomial of degree <= l.  The solution set
// over the integers is preserved exactly (all steps are invertible row
// operations, substitutions along retained equations, and nonzero scalings).

#include <string>
#include <vector>

#include "hlprime/polysys.hpp"

namespace hlprime {

// One linear elimination: the finished linear polynomial c * x_pivot + ftilde
// (integer, content-free, c > 0).  The substitution applied to higher-degree
// polynomials was x_pivot = -ftilde / c.
struct LinearElimination {
    int pivot_var = -1;
    mpz_class c;
    Polynomial ftilde;
};

// One finished polynomial of the normal form.
struct NormalFormEntry {
    int degree = 0;                     // l
    Exponents leading;                  // w^{j_{l,r}}
    mpz_class c;                        // nonzero integer
    Polynomial chi;                     // residual from reduction; zero when l = 1
    Polynomial tail;                    // ftilde_{l,r}
    Polynomial assembled() const;       // c * leading + chi + tail
};

struct NormalForm {
    int n = 0;
    MonomialOrder order;
    std::vector<int> w_vars;            // designated variable indices, stage order
    std::vector<LinearElimination> substitutions;
    std::vector<NormalFormEntry> entries;  // sorted by (degree, row)

    // reassemble as a plain integer system
    PolySystem system() const;
};

struct EliminateResult {
    NormalForm partial;    // linear entries, substitutions, w_vars so far
    PolySystem higher;     // degree >= 2 polynomials, pivots substituted out
};

// Brings the linear group to RREF (pivot = greatest-priority variable with a
// nonzero coefficient), substitutes the pivots out of all higher-degree
// polynomials, and rescales everything to content-free integer polynomials.
// Errors: linearly dependent linear forms (rank deficiency); degree collapse
// of a higher polynomial under the substitution (full-rank violation at that
// degree).
EliminateResult eliminate_linear(const PolySystem& s,
                                 const MonomialOrder& ord = MonomialOrder{});

NormalForm reduce_to_normal_form(const PolySystem& s,
                                 const MonomialOrder& ord = MonomialOrder{});

struct VerifyReport {
    struct Property {
        bool ok = true;
        std::vector<std::string> witnesses;  // counterexamples, human-readable
    };
    Property shape;          // property (1): c nonzero integer, leading monomial really leads
    Property distinctness;   // property (2): distinct, no divisibility by lower degree
    Property chi_clean;      // property (3)
    Property tail_clean;     // property (4)
    Property k_bound;        // |w_vars| <= sum l * r_l
    // constructive h upper bound per degree-l entry's chi (leading homogeneous part)
    std::vector<std::pair<int, int>> chi_h_bounds;  // (degree, bound)
    bool all_ok() const {
        return shape.ok && distinctness.ok && chi_clean.ok && tail_clean.ok && k_bound.ok;
    }
};

VerifyReport verify_normal_form(const NormalForm& nf);

// NormalForm JSON: system term encoding plus "w_vars" and "substitutions".
std::string serialize_normal_form(const NormalForm& nf);

}  // namespace hlprime
