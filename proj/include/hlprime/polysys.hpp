#pragma once

// Exact multivariate polynomial arithmetic over the rationals, graded
// lexicographic monomial orders, homogeneous decomposition, and the JSON
// system format.
//
// A system groups its polynomials by total degree l = 1..d with r_l members
// in group l; R = sum r_l and D = sum l * r_l.  System coefficients are
// integers (enforced at construction); intermediate arithmetic inside the
// normal-form reduction is exact rational, hence mpq throughout.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hlprime/common.hpp"

namespace hlprime {

using Exponents = std::vector<std::uint32_t>;

inline int total_degree(const Exponents& e) {
    int d = 0;
    for (auto x : e) d += static_cast<int>(x);
    return d;
}

// m | m' iff every exponent of m is <= the corresponding exponent of m'
inline bool monomial_divides(const Exponents& m, const Exponents& mp) {
    if (m.size() != mp.size()) throw validation_error("monomial_divides: dimension mismatch");
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > mp[i]) return false;
    return true;
}

// Graded lexicographic order.  variable_priority is a permutation of
// 0..n-1: priority[0] is the most significant variable in the lex
// tie-break.  Default is the identity, so x1 > x2 > ... > xn.
struct MonomialOrder {
    std::vector<int> variable_priority;

    static MonomialOrder identity(int n) {
        MonomialOrder o;
        o.variable_priority.resize(n);
        for (int i = 0; i < n; ++i) o.variable_priority[i] = i;
        return o;
    }
    static MonomialOrder reversed(int n) {
        MonomialOrder o;
        o.variable_priority.resize(n);
        for (int i = 0; i < n; ++i) o.variable_priority[i] = n - 1 - i;
        return o;
    }
    void validate(int n) const;
};

// -1 if a < b, 0 if equal, +1 if a > b.  Total degree first, then lex by
// variable_priority.
int monomial_cmp(const Exponents& a, const Exponents& b, const MonomialOrder& ord);

// ----------------------------------------------------------------------------

class Polynomial {
  public:
    Polynomial() : n_(0) {}
    explicit Polynomial(int n) : n_(n) {}

    int n() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    // total degree; -1 for the zero polynomial
    int degree() const;

    // no zero coefficients are ever stored
    const std::map<Exponents, mpq_class>& terms() const { return terms_; }

    void set_coeff(const Exponents& e, const mpq_class& c);
    void add_term(const Exponents& e, const mpq_class& c);
    mpq_class coeff(const Exponents& e) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator-() const;
    bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    void scale(const mpq_class& c);
    Polynomial scaled(const mpq_class& c) const;

    // exact value at a rational point
    mpq_class evaluate(const std::vector<mpq_class>& x) const;
    mpq_class evaluate_int(const std::vector<std::int64_t>& x) const;
    double evaluate_double(const std::vector<double>& x) const;

    // sum of the degree-j terms
    Polynomial homogeneous_part(int j) const;

    // replace variable var by the polynomial sub (exact composition)
    Polynomial substitute(int var, const Polynomial& sub) const;

    // d/dx_var
    Polynomial derivative(int var) const;

    // greatest monomial under ord; error on the zero polynomial
    Exponents leading_monomial(const MonomialOrder& ord) const;

    bool integer_coefficients() const;
    // lcm of coefficient denominators
    mpz_class denominator_lcm() const;
    // gcd of coefficient numerators (0 for the zero polynomial)
    mpz_class content() const;
    bool uses_variable(int var) const;

    std::string to_string() const;  // human-readable, for diagnostics

    static Polynomial constant(int n, const mpq_class& c);
    static Polynomial variable(int n, int var);

  private:
    int n_;
    std::map<Exponents, mpq_class> terms_;
};

// ----------------------------------------------------------------------------

class PolySystem {
  public:
    PolySystem() : n_(0) {}
    // polys carry their group degree; every polynomial must have total
    // degree exactly its declared group degree.  Rational coefficients are
    // legal here (rescaled systems need them); routines that require
    // integrality check it themselves.
    PolySystem(int n, std::vector<std::pair<int, Polynomial>> degree_poly_pairs);

    int n() const { return n_; }
    int max_degree() const;                      // d (0 for the empty system)
    int R() const { return static_cast<int>(polys_.size()); }
    int D() const;                               // sum of l * r_l
    int r(int ell) const;                        // group size at degree ell

    const std::vector<std::pair<int, Polynomial>>& entries() const { return polys_; }
    // all polynomials of declared degree ell, in insertion order
    std::vector<Polynomial> group(int ell) const;
    // flattened list ordered by (degree, insertion)
    std::vector<const Polynomial*> all() const;

    bool all_integer() const;

  private:
    int n_;
    std::vector<std::pair<int, Polynomial>> polys_;  // sorted by degree, stable
};

// JSON wire format (bit-exact):
//   {"n": int, "polys": [{"degree": int,
//                         "terms": [{"exp": [int;n], "c": "decimal"}...]}...]}
// Coefficients are decimal strings (arbitrary precision); plain JSON
// integers are accepted on input.  serialize(parse(x)) is the identity on
// canonical documents; terms are emitted in decreasing graded-lex order
// under the identity priority.
PolySystem parse_system(const std::string& text);
std::string serialize_system(const PolySystem& s);

}  // namespace hlprime
