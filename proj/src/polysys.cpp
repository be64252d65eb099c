#include "hlprime/polysys.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace hlprime {

void MonomialOrder::validate(int n) const {
    if (static_cast<int>(variable_priority.size()) != n)
        throw validation_error("MonomialOrder: priority length does not match variable count");
    std::vector<bool> seen(n, false);
    for (int v : variable_priority) {
        if (v < 0 || v >= n || seen[v])
            throw validation_error("MonomialOrder: priority is not a permutation");
        seen[v] = true;
    }
}

int monomial_cmp(const Exponents& a, const Exponents& b, const MonomialOrder& ord) {
    if (a.size() != b.size())
        throw validation_error("monomial_cmp: dimension mismatch");
    if (ord.variable_priority.size() != a.size())
        throw validation_error("monomial_cmp: order dimension mismatch");
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db ? -1 : 1;
    for (int v : ord.variable_priority) {
        if (a[v] != b[v]) return a[v] < b[v] ? -1 : 1;
    }
    return 0;
}

// ----------------------------------------------------------------------------
// Polynomial

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

void Polynomial::set_coeff(const Exponents& e, const mpq_class& c) {
    if (static_cast<int>(e.size()) != n_)
        throw validation_error("Polynomial: exponent dimension mismatch");
    if (c == 0)
        terms_.erase(e);
    else
        terms_[e] = c;
}

void Polynomial::add_term(const Exponents& e, const mpq_class& c) {
    if (static_cast<int>(e.size()) != n_)
        throw validation_error("Polynomial: exponent dimension mismatch");
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

mpq_class Polynomial::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? mpq_class(0) : it->second;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (n_ != o.n_) throw validation_error("Polynomial: dimension mismatch in +");
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (n_ != o.n_) throw validation_error("Polynomial: dimension mismatch in -");
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    Polynomial r = *this;
    r += o;
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial r = *this;
    r -= o;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (n_ != o.n_) throw validation_error("Polynomial: dimension mismatch in *");
    Polynomial r(n_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            Exponents e(n_);
            for (int i = 0; i < n_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r(n_);
    for (const auto& [e, c] : terms_) r.terms_[e] = -c;
    return r;
}

void Polynomial::scale(const mpq_class& c) {
    if (c == 0) {
        terms_.clear();
        return;
    }
    for (auto& [e, v] : terms_) v *= c;
}

Polynomial Polynomial::scaled(const mpq_class& c) const {
    Polynomial r = *this;
    r.scale(c);
    return r;
}

mpq_class Polynomial::evaluate(const std::vector<mpq_class>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw validation_error("evaluate: dimension mismatch");
    mpq_class acc = 0;
    for (const auto& [e, c] : terms_) {
        mpq_class term = c;
        for (int i = 0; i < n_; ++i) {
            for (std::uint32_t k = 0; k < e[i]; ++k) term *= x[i];
        }
        acc += term;
    }
    return acc;
}

mpq_class Polynomial::evaluate_int(const std::vector<std::int64_t>& x) const {
    std::vector<mpq_class> q(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) q[i] = mpq_class(static_cast<long>(x[i]));
    return evaluate(q);
}

double Polynomial::evaluate_double(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw validation_error("evaluate_double: dimension mismatch");
    double acc = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (int i = 0; i < n_; ++i) {
            for (std::uint32_t k = 0; k < e[i]; ++k) term *= x[i];
        }
        acc += term;
    }
    return acc;
}

Polynomial Polynomial::homogeneous_part(int j) const {
    Polynomial r(n_);
    for (const auto& [e, c] : terms_)
        if (total_degree(e) == j) r.terms_[e] = c;
    return r;
}

Polynomial Polynomial::substitute(int var, const Polynomial& sub) const {
    if (var < 0 || var >= n_) throw validation_error("substitute: variable out of range");
    if (sub.n_ != n_) throw validation_error("substitute: dimension mismatch");
    Polynomial r(n_);
    for (const auto& [e, c] : terms_) {
        Exponents base = e;
        std::uint32_t k = base[var];
        base[var] = 0;
        Polynomial term(n_);
        term.set_coeff(base, c);
        for (std::uint32_t i = 0; i < k; ++i) term = term * sub;
        r += term;
    }
    return r;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= n_) throw validation_error("derivative: variable out of range");
    Polynomial r(n_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents d = e;
        d[var] -= 1;
        r.add_term(d, c * mpq_class(static_cast<long>(e[var])));
    }
    return r;
}

Exponents Polynomial::leading_monomial(const MonomialOrder& ord) const {
    if (terms_.empty()) throw validation_error("leading_monomial: zero polynomial");
    const Exponents* best = nullptr;
    for (const auto& [e, c] : terms_) {
        if (!best || monomial_cmp(e, *best, ord) > 0) best = &e;
    }
    return *best;
}

bool Polynomial::integer_coefficients() const {
    for (const auto& [e, c] : terms_)
        if (c.get_den() != 1) return false;
    return true;
}

mpz_class Polynomial::denominator_lcm() const {
    mpz_class l = 1;
    for (const auto& [e, c] : terms_) {
        mpz_class d = c.get_den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
        l = l / g * d;
    }
    return l;
}

mpz_class Polynomial::content() const {
    mpz_class g = 0;
    for (const auto& [e, c] : terms_) {
        mpz_class num = c.get_num();
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    }
    return g;
}

bool Polynomial::uses_variable(int var) const {
    for (const auto& [e, c] : terms_)
        if (e[var] > 0) return true;
    return false;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    // print leading-first under the identity order for readability
    std::vector<const std::pair<const Exponents, mpq_class>*> ts;
    for (const auto& t : terms_) ts.push_back(&t);
    MonomialOrder ord = MonomialOrder::identity(n_);
    std::sort(ts.begin(), ts.end(), [&](auto* a, auto* b) {
        return monomial_cmp(a->first, b->first, ord) > 0;
    });
    std::ostringstream os;
    bool first = true;
    for (auto* t : ts) {
        const auto& [e, c] = *t;
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        mpq_class a = abs(c);
        bool any_var = total_degree(e) > 0;
        if (a != 1 || !any_var) os << a.get_str();
        bool star = (a != 1);
        for (int i = 0; i < n_; ++i) {
            if (e[i] == 0) continue;
            if (star) os << "*";
            os << "x" << (i + 1);
            if (e[i] > 1) os << "^" << e[i];
            star = true;
        }
    }
    return os.str();
}

Polynomial Polynomial::constant(int n, const mpq_class& c) {
    Polynomial p(n);
    p.set_coeff(Exponents(n, 0), c);
    return p;
}

Polynomial Polynomial::variable(int n, int var) {
    if (var < 0 || var >= n) throw validation_error("Polynomial::variable out of range");
    Polynomial p(n);
    Exponents e(n, 0);
    e[var] = 1;
    p.set_coeff(e, 1);
    return p;
}

// ----------------------------------------------------------------------------
// PolySystem

PolySystem::PolySystem(int n, std::vector<std::pair<int, Polynomial>> degree_poly_pairs)
    : n_(n), polys_(std::move(degree_poly_pairs)) {
    if (n < 0) throw validation_error("PolySystem: negative variable count");
    for (auto& [ell, p] : polys_) {
        if (p.n() != n) throw validation_error("PolySystem: polynomial dimension mismatch");
        if (ell < 1) throw validation_error("PolySystem: group degree must be >= 1");
        if (p.degree() != ell)
            throw validation_error("PolySystem: declared degree " + std::to_string(ell) +
                                   " but actual degree " + std::to_string(p.degree()));
    }
    std::stable_sort(polys_.begin(), polys_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
}

int PolySystem::max_degree() const {
    int d = 0;
    for (const auto& [ell, p] : polys_) d = std::max(d, ell);
    return d;
}

int PolySystem::D() const {
    int acc = 0;
    for (const auto& [ell, p] : polys_) acc += ell;
    return acc;
}

int PolySystem::r(int ell) const {
    int c = 0;
    for (const auto& [l, p] : polys_)
        if (l == ell) ++c;
    return c;
}

std::vector<Polynomial> PolySystem::group(int ell) const {
    std::vector<Polynomial> out;
    for (const auto& [l, p] : polys_)
        if (l == ell) out.push_back(p);
    return out;
}

std::vector<const Polynomial*> PolySystem::all() const {
    std::vector<const Polynomial*> out;
    for (const auto& [l, p] : polys_) out.push_back(&p);
    return out;
}

bool PolySystem::all_integer() const {
    for (const auto& [l, p] : polys_)
        if (!p.integer_coefficients()) return false;
    return true;
}

// ----------------------------------------------------------------------------
// JSON wire format

PolySystem parse_system(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("parse_system: malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("polys"))
        throw validation_error("parse_system: expected object with \"n\" and \"polys\"");
    if (!j["n"].is_number_integer())
        throw validation_error("parse_system: \"n\" must be an integer");
    int n = j["n"].get<int>();
    if (n < 1) throw validation_error("parse_system: n must be >= 1");

    std::vector<std::pair<int, Polynomial>> polys;
    for (const auto& jp : j["polys"]) {
        if (!jp.contains("degree") || !jp["degree"].is_number_integer())
            throw validation_error("parse_system: polynomial missing integer \"degree\"");
        int ell = jp["degree"].get<int>();
        Polynomial p(n);
        for (const auto& jt : jp.value("terms", nlohmann::json::array())) {
            if (!jt.contains("exp") || !jt["exp"].is_array() ||
                static_cast<int>(jt["exp"].size()) != n)
                throw validation_error("parse_system: term \"exp\" must be an array of length n");
            Exponents e(n);
            for (int i = 0; i < n; ++i) {
                if (!jt["exp"][i].is_number_integer() || jt["exp"][i].get<std::int64_t>() < 0)
                    throw validation_error("parse_system: exponents must be non-negative integers");
                e[i] = jt["exp"][i].get<std::uint32_t>();
            }
            if (!jt.contains("c"))
                throw validation_error("parse_system: term missing coefficient \"c\"");
            mpz_class c;
            if (jt["c"].is_string()) {
                std::string cs = jt["c"].get<std::string>();
                if (mpz_set_str(c.get_mpz_t(), cs.c_str(), 10) != 0)
                    throw validation_error("parse_system: non-integer coefficient \"" + cs + "\"");
            } else if (jt["c"].is_number_integer()) {
                c = mpz_class(std::to_string(jt["c"].get<std::int64_t>()));
            } else {
                throw validation_error("parse_system: non-integer coefficient where integers required");
            }
            p.add_term(e, mpq_class(c));
        }
        polys.emplace_back(ell, std::move(p));
    }
    return PolySystem(n, std::move(polys));  // degree/integrality validated there
}

std::string serialize_system(const PolySystem& s) {
    // ordered_json keeps insertion order so the byte layout is canonical:
    // n, polys; degree, terms; exp, c.  Terms leading-first.
    nlohmann::ordered_json j;
    j["n"] = s.n();
    j["polys"] = nlohmann::ordered_json::array();
    MonomialOrder ord = MonomialOrder::identity(s.n());
    for (const auto& [ell, p] : s.entries()) {
        nlohmann::ordered_json jp;
        jp["degree"] = ell;
        jp["terms"] = nlohmann::ordered_json::array();
        std::vector<const std::pair<const Exponents, mpq_class>*> ts;
        for (const auto& t : p.terms()) ts.push_back(&t);
        std::sort(ts.begin(), ts.end(), [&](auto* a, auto* b) {
            return monomial_cmp(a->first, b->first, ord) > 0;
        });
        for (auto* t : ts) {
            nlohmann::ordered_json jt;
            jt["exp"] = t->first;
            jt["c"] = t->second.get_num().get_str();
            jp["terms"].push_back(jt);
        }
        j["polys"].push_back(jp);
    }
    return j.dump();
}

}  // namespace hlprime
