#include "hlprime/normalize.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "hlprime/invariants.hpp"
#include "hlprime/qmatrix.hpp"

namespace hlprime {

namespace {

MonomialOrder resolve_order(const MonomialOrder& ord, int n) {
    if (ord.variable_priority.empty()) return MonomialOrder::identity(n);
    MonomialOrder o = ord;
    o.validate(n);
    return o;
}

std::string mono_str(const Exponents& e) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (any) os << "*";
        os << "x" << (i + 1);
        if (e[i] > 1) os << "^" << e[i];
        any = true;
    }
    if (!any) os << "1";
    return os.str();
}

// Scale a set of rational polynomials jointly so all coefficients become
// integers with overall content 1.  Returns the applied factor.
mpq_class joint_integer_scale(std::vector<Polynomial*> polys) {
    mpz_class den = 1;
    for (auto* p : polys) {
        mpz_class d = p->denominator_lcm();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
        den = den / g * d;
    }
    mpz_class num = 0;
    for (auto* p : polys) {
        Polynomial scaled = p->scaled(mpq_class(den));
        mpz_class c = scaled.content();
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_mpz_t());
    }
    if (num == 0) num = 1;
    mpq_class factor(den, num);
    factor.canonicalize();
    for (auto* p : polys) p->scale(factor);
    return factor;
}

struct WorkingPoly {
    int degree = 0;   // declared group degree
    Polynomial chi;   // accumulates the Groebner remainder of divisible monomials
    Polynomial tail;  // divisibility-free part
    Polynomial sum() const { return chi + tail; }
};

}  // namespace

Polynomial NormalFormEntry::assembled() const {
    Polynomial lead(chi.n() ? chi.n() : tail.n());
    lead.set_coeff(leading, mpq_class(c));
    return lead + chi + tail;
}

PolySystem NormalForm::system() const {
    std::vector<std::pair<int, Polynomial>> polys;
    for (const auto& e : entries) polys.emplace_back(e.degree, e.assembled());
    return PolySystem(n, std::move(polys));
}

// ----------------------------------------------------------------------------
// stage 1: linear elimination

EliminateResult eliminate_linear(const PolySystem& s, const MonomialOrder& ord_in) {
    MonomialOrder ord = resolve_order(ord_in, s.n());
    const int n = s.n();
    EliminateResult out;
    out.partial.n = n;
    out.partial.order = ord;

    std::vector<Polynomial> lin = s.group(1);
    const int r1 = static_cast<int>(lin.size());
    if (r1 == 0) {
        out.higher = s;
        return out;
    }

    // columns: variables in priority order, then the constant term
    QMatrix m(r1, n + 1);
    for (int i = 0; i < r1; ++i) {
        for (int k = 0; k < n; ++k) {
            Exponents e(n, 0);
            e[ord.variable_priority[k]] = 1;
            m.at(i, k) = lin[i].coeff(e);
        }
        m.at(i, n) = lin[i].coeff(Exponents(n, 0));
    }
    RrefResult rr = rref(m);
    // the constant column must not host a pivot; if it does, the variable
    // columns were dependent (e.g. rows {x1+x2, x1+x2-1})
    int var_rank = 0;
    for (int c : rr.pivot_cols)
        if (c < n) ++var_rank;
    if (var_rank < r1)
        throw validation_error(
            "eliminate_linear: linear forms are linearly dependent (rank " +
            std::to_string(var_rank) + " < r_1 = " + std::to_string(r1) + ")");

    // rational substitutions x_pivot = -(row minus pivot), straight from RREF
    std::vector<std::pair<int, Polynomial>> subs;  // (variable, replacement)
    for (int i = 0; i < r1; ++i) {
        int pivot_col = rr.pivot_cols[i];
        int pivot_var = ord.variable_priority[pivot_col];
        Polynomial repl(n);
        for (int k = 0; k < n; ++k) {
            if (k == pivot_col) continue;
            if (rr.r.at(i, k) == 0) continue;
            Exponents e(n, 0);
            e[ord.variable_priority[k]] = 1;
            repl.add_term(e, -rr.r.at(i, k));
        }
        repl.add_term(Exponents(n, 0), -rr.r.at(i, n));
        subs.emplace_back(pivot_var, repl);
    }

    // finished linear entries: integer scale each RREF row, pivot coefficient positive
    for (int i = 0; i < r1; ++i) {
        int pivot_var = subs[i].first;
        Polynomial ftilde = -subs[i].second;  // row = x_pivot + ftilde (pivot coeff 1)
        Polynomial lead = Polynomial::variable(n, pivot_var);
        Polynomial full = lead + ftilde;
        joint_integer_scale({&full});
        Exponents pe(n, 0);
        pe[pivot_var] = 1;
        mpq_class c = full.coeff(pe);
        if (c < 0) {
            full.scale(-1);
            c = -c;
        }
        LinearElimination le;
        le.pivot_var = pivot_var;
        le.c = c.get_num();
        full.set_coeff(pe, 0);
        le.ftilde = full;
        out.partial.substitutions.push_back(le);
        out.partial.w_vars.push_back(pivot_var);

        NormalFormEntry entry;
        entry.degree = 1;
        entry.leading = pe;
        entry.c = le.c;
        entry.chi = Polynomial(n);
        entry.tail = le.ftilde;
        out.partial.entries.push_back(entry);
    }

    // substitute the pivots out of every higher-degree polynomial
    std::vector<std::pair<int, Polynomial>> higher;
    for (const auto& [ell, p] : s.entries()) {
        if (ell == 1) continue;
        Polynomial q = p;
        for (const auto& [var, repl] : subs) q = q.substitute(var, repl);
        if (q.degree() != ell)
            throw validation_error(
                "eliminate_linear: full-rank violation at degree " + std::to_string(ell) +
                " (polynomial degenerates to degree " + std::to_string(q.degree()) +
                " after substitution)");
        joint_integer_scale({&q});
        Exponents lm = q.leading_monomial(ord);
        if (q.coeff(lm) < 0) q.scale(-1);
        higher.emplace_back(ell, std::move(q));
    }
    out.higher = PolySystem(n, std::move(higher));
    return out;
}

// ----------------------------------------------------------------------------
// stages l >= 2

NormalForm reduce_to_normal_form(const PolySystem& s, const MonomialOrder& ord_in) {
    MonomialOrder ord = resolve_order(ord_in, s.n());
    const int n = s.n();
    EliminateResult el = eliminate_linear(s, ord);
    NormalForm nf = std::move(el.partial);
    nf.n = n;
    nf.order = ord;

    const int d = el.higher.max_degree();
    std::vector<NormalFormEntry> finalized;  // degree >= 2, reduction sources

    for (int ell0 = 2; ell0 <= d; ++ell0) {
        std::vector<Polynomial> grp = el.higher.group(ell0);
        if (grp.empty()) continue;  // r_l = 0, skipped
        const int r = static_cast<int>(grp.size());

        // split off and reduce the monomials divisible by a finalized lower
        // leading monomial; the remainder accumulates into chi
        std::vector<WorkingPoly> work(r);
        for (int i = 0; i < r; ++i) {
            work[i].degree = ell0;
            work[i].chi = Polynomial(n);
            work[i].tail = Polynomial(n);
            Polynomial divisible(n);
            for (const auto& [e, c] : grp[i].terms()) {
                bool div = false;
                for (const auto& fin : finalized)
                    if (monomial_divides(fin.leading, e)) {
                        div = true;
                        break;
                    }
                (div ? divisible : work[i].tail).add_term(e, c);
            }
            // Groebner-style reduction of the divisible part; each step
            // removes the greatest divisible monomial and only introduces
            // strictly smaller ones, so the loop terminates
            Polynomial& chi = work[i].chi;
            chi = divisible;
            long guard = 0;
            for (;;) {
                const Exponents* worst = nullptr;
                const NormalFormEntry* src = nullptr;
                for (const auto& [e, c] : chi.terms()) {
                    for (const auto& fin : finalized) {
                        if (!monomial_divides(fin.leading, e)) continue;
                        if (!worst || monomial_cmp(e, *worst, ord) > 0) {
                            worst = &e;
                            src = &fin;
                        }
                        break;
                    }
                }
                if (!worst) break;
                if (++guard > 100000)
                    throw internal_error("reduce_to_normal_form: reduction did not terminate");
                Exponents quot(n);
                for (int k = 0; k < n; ++k) quot[k] = (*worst)[k] - src->leading[k];
                mpq_class zeta = chi.coeff(*worst) / mpq_class(src->c);
                Polynomial mult(n);
                mult.set_coeff(quot, zeta);
                chi -= mult * src->assembled();
            }
        }

        // coefficient matrix of the degree-l0 homogeneous parts over all
        // degree-l0 monomials present, columns in decreasing graded-lex order
        std::vector<Exponents> cols;
        {
            std::map<Exponents, int> seen;
            for (const auto& w : work) {
                const Polynomial ws = w.sum();
                for (const auto& [e, c] : ws.terms())
                    if (total_degree(e) == ell0) seen.emplace(e, 0);
            }
            for (auto& [e, z] : seen) cols.push_back(e);
            std::sort(cols.begin(), cols.end(),
                      [&](const Exponents& a, const Exponents& b) {
                          return monomial_cmp(a, b, ord) > 0;
                      });
        }
        QMatrix m(r, static_cast<int>(cols.size()));
        for (int i = 0; i < r; ++i) {
            Polynomial sum = work[i].sum();
            for (int j = 0; j < static_cast<int>(cols.size()); ++j)
                m.at(i, j) = sum.coeff(cols[j]);
        }
        RrefResult rr = rref(m);
        if (rr.rank < r)
            throw validation_error(
                "reduce_to_normal_form: full-rank violation at degree " + std::to_string(ell0) +
                " (leading-form rank " + std::to_string(rr.rank) + " < r = " + std::to_string(r) + ")");

        // apply the row transform to the chi/tail pairs
        std::vector<WorkingPoly> next(r);
        for (int i = 0; i < r; ++i) {
            next[i].degree = ell0;
            next[i].chi = Polynomial(n);
            next[i].tail = Polynomial(n);
            for (int j = 0; j < r; ++j) {
                mpq_class t = rr.transform.at(i, j);
                if (t == 0) continue;
                next[i].chi += work[j].chi.scaled(t);
                next[i].tail += work[j].tail.scaled(t);
            }
        }

        // pull out the leading monomial, rescale to integers, finalize
        for (int i = 0; i < r; ++i) {
            Exponents lead = cols[static_cast<std::size_t>(rr.pivot_cols[i])];
            mpq_class c_chi = next[i].chi.coeff(lead);
            mpq_class c_tail = next[i].tail.coeff(lead);
            if (c_chi + c_tail != 1)
                throw internal_error("reduce_to_normal_form: leading coefficient not unit after RREF");
            next[i].chi.set_coeff(lead, 0);
            next[i].tail.set_coeff(lead, 0);
            Polynomial cpoly = Polynomial::constant(n, 1);
            joint_integer_scale({&cpoly, &next[i].chi, &next[i].tail});
            mpq_class c = cpoly.coeff(Exponents(n, 0));
            if (c < 0) {
                c = -c;
                next[i].chi.scale(-1);
                next[i].tail.scale(-1);
            }
            NormalFormEntry entry;
            entry.degree = ell0;
            entry.leading = lead;
            entry.c = c.get_num();
            entry.chi = next[i].chi;
            entry.tail = next[i].tail;
            finalized.push_back(entry);
            for (int k = 0; k < n; ++k) {
                if (lead[static_cast<std::size_t>(ord.variable_priority[k])] == 0) continue;
                int v = ord.variable_priority[k];
                if (std::find(nf.w_vars.begin(), nf.w_vars.end(), v) == nf.w_vars.end())
                    nf.w_vars.push_back(v);
            }
        }
    }

    for (auto& e : finalized) nf.entries.push_back(std::move(e));
    if (static_cast<int>(nf.w_vars.size()) > s.D())
        throw internal_error("reduce_to_normal_form: K exceeds sum of l*r_l");
    return nf;
}

// ----------------------------------------------------------------------------
// verification

VerifyReport verify_normal_form(const NormalForm& nf) {
    VerifyReport rep;
    const int n = nf.n;
    MonomialOrder ord = resolve_order(nf.order, n);

    // (1) shape: integer nonzero c, correct degree, leading monomial leads
    for (const auto& e : nf.entries) {
        if (e.c == 0) {
            rep.shape.ok = false;
            rep.shape.witnesses.push_back("zero c at degree " + std::to_string(e.degree));
        }
        if (total_degree(e.leading) != e.degree) {
            rep.shape.ok = false;
            rep.shape.witnesses.push_back("leading monomial " + mono_str(e.leading) +
                                          " does not have degree " + std::to_string(e.degree));
        }
        if (e.degree == 1 && !e.chi.is_zero()) {
            rep.shape.ok = false;
            rep.shape.witnesses.push_back("nonzero chi on a linear entry");
        }
        if (!e.chi.integer_coefficients() || !e.tail.integer_coefficients()) {
            rep.shape.ok = false;
            rep.shape.witnesses.push_back("non-integer coefficients at degree " +
                                          std::to_string(e.degree));
        }
        Polynomial rest = e.chi + e.tail;
        for (const auto& [mono, c] : rest.terms()) {
            if (monomial_cmp(mono, e.leading, ord) >= 0) {
                rep.shape.ok = false;
                rep.shape.witnesses.push_back("monomial " + mono_str(mono) +
                                              " not below leading " + mono_str(e.leading));
            }
        }
    }

    // (2) distinct leading monomials; none divisible by a lower-degree one
    for (std::size_t i = 0; i < nf.entries.size(); ++i) {
        for (std::size_t j = 0; j < nf.entries.size(); ++j) {
            if (i == j) continue;
            const auto& a = nf.entries[i];
            const auto& b = nf.entries[j];
            if (a.leading == b.leading && i < j) {
                rep.distinctness.ok = false;
                rep.distinctness.witnesses.push_back("duplicate leading monomial " +
                                                     mono_str(a.leading));
            }
            if (b.degree < a.degree && monomial_divides(b.leading, a.leading)) {
                rep.distinctness.ok = false;
                rep.distinctness.witnesses.push_back(
                    mono_str(a.leading) + " (degree " + std::to_string(a.degree) +
                    ") divisible by " + mono_str(b.leading) + " (degree " +
                    std::to_string(b.degree) + ")");
            }
        }
    }

    // (3), (4): chi and tail free of every leading monomial of degree <= l
    auto check_clean = [&](const Polynomial& p, int ell, VerifyReport::Property& prop,
                           const char* label) {
        for (const auto& [mono, c] : p.terms()) {
            for (const auto& other : nf.entries) {
                if (other.degree > ell) continue;
                if (monomial_divides(other.leading, mono)) {
                    prop.ok = false;
                    prop.witnesses.push_back(std::string(label) + " monomial " + mono_str(mono) +
                                             " divisible by leading " + mono_str(other.leading));
                }
            }
        }
    };
    for (const auto& e : nf.entries) {
        check_clean(e.chi, e.degree, rep.chi_clean, "chi");
        check_clean(e.tail, e.degree, rep.tail_clean, "tail");
    }

    // K bound
    int D = 0;
    for (const auto& e : nf.entries) D += e.degree;
    if (static_cast<int>(nf.w_vars.size()) > D) {
        rep.k_bound.ok = false;
        rep.k_bound.witnesses.push_back("K = " + std::to_string(nf.w_vars.size()) +
                                        " exceeds sum l*r_l = " + std::to_string(D));
    }

    // reported h-invariant upper bounds for the chi parts (degree-l portion)
    for (const auto& e : nf.entries) {
        if (e.degree < 2 || e.chi.is_zero() || e.chi.degree() < 1) continue;
        Polynomial top = e.chi.homogeneous_part(e.chi.degree());
        rep.chi_h_bounds.emplace_back(e.degree, h_upper_bound(top));
    }
    return rep;
}

// ----------------------------------------------------------------------------
// JSON

namespace {

nlohmann::ordered_json terms_json(const Polynomial& p, const MonomialOrder& ord) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    std::vector<const std::pair<const Exponents, mpq_class>*> ts;
    for (const auto& t : p.terms()) ts.push_back(&t);
    std::sort(ts.begin(), ts.end(),
              [&](auto* a, auto* b) { return monomial_cmp(a->first, b->first, ord) > 0; });
    for (auto* t : ts) {
        nlohmann::ordered_json jt;
        jt["exp"] = t->first;
        jt["c"] = t->second.get_num().get_str();
        arr.push_back(jt);
    }
    return arr;
}

}  // namespace

std::string serialize_normal_form(const NormalForm& nf) {
    MonomialOrder ord = resolve_order(nf.order, nf.n);
    nlohmann::ordered_json j;
    j["n"] = nf.n;
    j["w_vars"] = nf.w_vars;
    j["substitutions"] = nlohmann::ordered_json::array();
    for (const auto& s : nf.substitutions) {
        nlohmann::ordered_json js;
        js["pivot_var"] = s.pivot_var;
        js["c"] = s.c.get_str();
        js["ftilde"] = terms_json(s.ftilde, ord);
        j["substitutions"].push_back(js);
    }
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : nf.entries) {
        nlohmann::ordered_json je;
        je["degree"] = e.degree;
        je["leading"] = {{"exp", e.leading}, {"c", e.c.get_str()}};
        je["chi"] = terms_json(e.chi, ord);
        je["tail"] = terms_json(e.tail, ord);
        j["entries"].push_back(je);
    }
    return j.dump();
}

}  // namespace hlprime
