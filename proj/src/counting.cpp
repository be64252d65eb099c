#include "hlprime/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

namespace hlprime {

namespace {

using i128 = __int128;

// ----------------------------------------------------------------------------
// compiled integer evaluation
//
// Exact as long as the precomputed worst-case bound fits well inside 128
// bits; construction fails (falls back to mpq evaluation) otherwise.

struct CompiledTerm {
    long long c;
    std::vector<std::pair<int, int>> varexp;  // (variable, exponent), exponent >= 1
};

struct CompiledPoly {
    std::vector<CompiledTerm> terms;

    i128 eval(const std::int64_t* x) const {
        i128 acc = 0;
        for (const auto& t : terms) {
            i128 v = t.c;
            for (auto [var, e] : t.varexp) {
                i128 b = x[var];
                for (int k = 0; k < e; ++k) v *= b;
            }
            acc += v;
        }
        return acc;
    }
};

// returns false when coefficients or the value bound do not fit
bool compile_poly(const Polynomial& p, std::int64_t max_abs_x, CompiledPoly& out) {
    out.terms.clear();
    long double bound = 0;
    for (const auto& [e, c] : p.terms()) {
        if (c.get_den() != 1) return false;
        if (!c.get_num().fits_slong_p()) return false;
        CompiledTerm t;
        t.c = c.get_num().get_si();
        long double tb = std::abs(static_cast<long double>(t.c));
        for (int i = 0; i < p.n(); ++i) {
            if (e[i] == 0) continue;
            t.varexp.emplace_back(i, static_cast<int>(e[i]));
            for (std::uint32_t k = 0; k < e[i]; ++k)
                tb *= static_cast<long double>(std::max<std::int64_t>(max_abs_x, 1));
        }
        bound += tb;
        out.terms.push_back(std::move(t));
    }
    // keep two bits of headroom under the 127-bit signed range
    return bound < std::ldexp(1.0L, 120);
}

struct CompiledSystem {
    std::vector<CompiledPoly> polys;
    bool ok = false;

    static CompiledSystem build(const PolySystem& s, std::int64_t max_abs_x) {
        CompiledSystem cs;
        cs.polys.resize(s.entries().size());
        cs.ok = true;
        std::size_t i = 0;
        for (const auto& [ell, p] : s.entries()) {
            if (!compile_poly(p, max_abs_x, cs.polys[i++])) {
                cs.ok = false;
                break;
            }
        }
        return cs;
    }

    bool all_zero(const std::int64_t* x) const {
        for (const auto& p : polys)
            if (p.eval(x) != 0) return false;
        return true;
    }
};

bool all_zero_mpq(const PolySystem& s, const std::vector<std::int64_t>& x) {
    for (const auto& [ell, p] : s.entries())
        if (p.evaluate_int(x) != 0) return false;
    return true;
}

// ----------------------------------------------------------------------------
// linear pivot: a degree-1 equation c * x_v + rest(other vars) = 0

struct LinearPivot {
    int var = -1;
    long long c = 0;                        // coefficient of x_var
    std::vector<long long> rest_coeff;      // per-variable coefficients of rest
    long long rest_const = 0;

    // value of the linear form without the pivot term
    i128 rest(const std::int64_t* x, int n) const {
        i128 acc = rest_const;
        for (int i = 0; i < n; ++i) {
            if (i == var || rest_coeff[i] == 0) continue;
            acc += static_cast<i128>(rest_coeff[i]) * x[i];
        }
        return acc;
    }
};

// first linear equation with a unit-ish coefficient wins; prefer |c| = 1
bool find_pivot(const PolySystem& s, LinearPivot& out) {
    bool found = false;
    for (const auto& [ell, p] : s.entries()) {
        if (ell != 1) continue;
        LinearPivot cand;
        cand.rest_coeff.assign(s.n(), 0);
        bool fits = true;
        for (const auto& [e, c] : p.terms()) {
            if (!c.get_num().fits_slong_p() || c.get_den() != 1) {
                fits = false;
                break;
            }
            int deg = total_degree(e);
            if (deg == 0) {
                cand.rest_const = c.get_num().get_si();
            } else {
                int var = -1;
                for (int i = 0; i < s.n(); ++i)
                    if (e[i] == 1) var = i;
                cand.rest_coeff[var] = c.get_num().get_si();
            }
        }
        if (!fits) continue;
        for (int v = 0; v < s.n(); ++v) {
            if (cand.rest_coeff[v] == 0) continue;
            LinearPivot pick = cand;
            pick.var = v;
            pick.c = cand.rest_coeff[v];
            pick.rest_coeff[v] = 0;
            if (!found || (std::abs(pick.c) == 1 && std::abs(out.c) != 1)) {
                out = pick;
                found = true;
            }
            if (std::abs(out.c) == 1) return true;
        }
    }
    return found;
}

// ----------------------------------------------------------------------------
// support enumeration shared by weighted_count and prime_log_count

struct EnumOut {
    double sum = 0.0;
    std::int64_t raw = 0;
};

// Enumerates tuples of support entries for the free coordinates (mixed-radix
// over idx), assembles the full point (solving the pivot when present),
// weighs and tests.  Deterministic: fixed chunk partition, ordered merge.
EnumOut enumerate_support(const PolySystem& s, std::int64_t X,
                          const std::vector<std::pair<std::int64_t, double>>& support,
                          const CompiledSystem& cs, const LinearPivot* pivot,
                          const std::function<double(std::int64_t)>& solved_weight) {
    const int n = s.n();
    std::vector<int> free_vars;
    for (int i = 0; i < n; ++i)
        if (!pivot || i != pivot->var) free_vars.push_back(i);
    const int k = static_cast<int>(free_vars.size());
    const std::int64_t m = static_cast<std::int64_t>(support.size());
    std::int64_t total = 1;
    for (int i = 0; i < k; ++i) total *= m;  // caller bounded this

    const std::int64_t chunks = std::min<std::int64_t>(total, 1024);
    std::vector<double> psum(static_cast<std::size_t>(std::max<std::int64_t>(chunks, 1)), 0.0);
    std::vector<std::int64_t> praw(psum.size(), 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        std::int64_t lo = total * ci / chunks;
        std::int64_t hi = total * (ci + 1) / chunks;
        kahan_sum local;
        std::int64_t raw = 0;
        std::vector<std::int64_t> x(n, 0);
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            std::int64_t rem = idx;
            double w = 1.0;
            for (int i = 0; i < k; ++i) {
                const auto& [xv, wv] = support[static_cast<std::size_t>(rem % m)];
                rem /= m;
                x[free_vars[i]] = xv;
                w *= wv;
            }
            if (pivot) {
                i128 rest = pivot->rest(x.data(), n);
                i128 num = -rest;
                if (num % pivot->c != 0) continue;
                i128 sol = num / pivot->c;
                if (sol < 0 || sol > X) continue;
                x[pivot->var] = static_cast<std::int64_t>(sol);
                double wp = solved_weight(x[pivot->var]);
                if (wp == 0.0) continue;
                w *= wp;
            }
            bool zero = cs.ok ? cs.all_zero(x.data()) : all_zero_mpq(s, x);
            if (!zero) continue;
            local.add(w);
            ++raw;
        }
        psum[static_cast<std::size_t>(ci)] = local.value();
        praw[static_cast<std::size_t>(ci)] = raw;
    }
    EnumOut out;
    kahan_sum ks;
    for (std::size_t i = 0; i < psum.size(); ++i) {
        ks.add(psum[i]);
        out.raw += praw[i];
    }
    out.sum = ks.value();
    return out;
}

CountResult support_count(const PolySystem& s, std::int64_t X, const PrimeTable& pt,
                          const work_budget& budget, bool prime_only) {
    if (X < 0) throw validation_error("count: X must be >= 0");
    if (pt.limit() < X) throw validation_error("count: prime table smaller than X");
    auto t0 = std::chrono::steady_clock::now();

    auto support = prime_only ? pt.prime_log_support(X) : pt.lambda_support(X);
    const int n = s.n();
    const double m = static_cast<double>(support.size());

    LinearPivot pivot;
    bool has_pivot = find_pivot(s, pivot);
    double cost_grid = std::pow(m, n) * (s.R() + 1);
    double cost_pivot = has_pivot ? std::pow(m, n - 1) * (s.R() + 1) : cost_grid;
    const char* label;
    const LinearPivot* pv = nullptr;
    if (has_pivot && cost_pivot < cost_grid) {
        budget.check(prime_only ? "prime_log_count (pivot)" : "weighted_count (pivot)", cost_pivot);
        pv = &pivot;
        label = prime_only ? "prime-log-support-pivot" : "lambda-support-pivot";
    } else {
        budget.check(prime_only ? "prime_log_count (grid)" : "weighted_count (grid)", cost_grid);
        label = prime_only ? "prime-log-support-grid" : "lambda-support-grid";
    }

    CompiledSystem cs = CompiledSystem::build(s, X);
    std::function<double(std::int64_t)> solved_weight = [&](std::int64_t xv) {
        if (prime_only) return pt.is_prime(xv) ? std::log(static_cast<double>(xv)) : 0.0;
        return pt.von_mangoldt(xv);
    };
    EnumOut eo = enumerate_support(s, X, support, cs, pv, solved_weight);

    CountResult res;
    res.X = X;
    res.weighted_sum = eo.sum;
    res.raw_solutions = eo.raw;
    res.enumeration_strategy = label;
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace

CountResult weighted_count(const PolySystem& s, std::int64_t X, const PrimeTable& pt,
                           const work_budget& budget) {
    return support_count(s, X, pt, budget, false);
}

CountResult weighted_count(const PolySystem& s, std::int64_t X, const work_budget& budget) {
    PrimeTable pt(std::max<std::int64_t>(X, 2));
    return support_count(s, X, pt, budget, false);
}

CountResult prime_log_count(const PolySystem& s, std::int64_t X, const PrimeTable& pt,
                            const work_budget& budget) {
    return support_count(s, X, pt, budget, true);
}

CountResult prime_log_count(const PolySystem& s, std::int64_t X, const work_budget& budget) {
    PrimeTable pt(std::max<std::int64_t>(X, 2));
    return support_count(s, X, pt, budget, true);
}

// ----------------------------------------------------------------------------
// nu_t: solutions over unit tuples mod p^t

namespace {

std::int64_t mod_inv(std::int64_t a, std::int64_t m) {
    // extended euclid; gcd(a, m) must be 1
    std::int64_t old_r = a % m, rr = m, old_s = 1, ss = 0;
    if (old_r < 0) old_r += m;
    while (rr != 0) {
        std::int64_t q = old_r / rr;
        std::int64_t tmp = old_r - q * rr;
        old_r = rr;
        rr = tmp;
        tmp = old_s - q * ss;
        old_s = ss;
        ss = tmp;
    }
    if (old_r != 1) throw internal_error("mod_inv: argument not invertible");
    std::int64_t inv = old_s % m;
    if (inv < 0) inv += m;
    return inv;
}

Polynomial reduce_mod(const Polynomial& p, std::int64_t m) {
    Polynomial out(p.n());
    for (const auto& [e, c] : p.terms()) {
        mpz_class num = c.get_num();  // integer coefficients by construction
        mpz_class mm(static_cast<long>(m));
        mpz_class r = num % mm;
        if (r < 0) r += mm;
        out.add_term(e, mpq_class(r));
    }
    return out;
}

struct ModEq {
    Polynomial p;  // integer, reduced mod pr^e
    int e;
};

struct UnitCounter {
    std::int64_t pr;
    int t;
    const work_budget& budget;

    std::int64_t count(std::vector<ModEq> eqs, std::vector<int> vars, int tt) {
        const std::int64_t m_full = [&] {
            std::int64_t v = 1;
            for (int i = 0; i < tt; ++i) v *= pr;
            return v;
        }();

        // normalize: reduce, drop satisfied equations, detect inconsistency
        std::vector<ModEq> act;
        for (auto& eq : eqs) {
            std::int64_t me = 1;
            for (int i = 0; i < eq.e; ++i) me *= pr;
            Polynomial q = reduce_mod(eq.p, me);
            if (q.is_zero()) continue;
            if (q.degree() == 0) return 0;  // nonzero constant: inconsistent
            act.push_back({std::move(q), eq.e});
        }

        if (act.empty()) {
            // free tuple count phi(p^tt)^k; refuse if it cannot fit
            std::int64_t phi1 = 1;
            for (int i = 1; i < tt; ++i) phi1 *= pr;
            phi1 *= (pr - 1);
            long double bound = 1;
            for (std::size_t i = 0; i < vars.size(); ++i) bound *= static_cast<long double>(phi1);
            if (bound > 9.0e18L)
                throw budget_error("nu_t: count exceeds 64-bit range", static_cast<double>(bound),
                                   9.0e18);
            std::int64_t out = 1;
            for (std::size_t i = 0; i < vars.size(); ++i) out *= phi1;
            return out;
        }

        // pivot: full-modulus equation, linear in some variable with a unit
        // coefficient, variable absent from its other monomials
        for (std::size_t ei = 0; ei < act.size(); ++ei) {
            if (act[ei].e != tt) continue;
            for (int v : vars) {
                Exponents lin(act[ei].p.n(), 0);
                lin[v] = 1;
                mpq_class cq = act[ei].p.coeff(lin);
                if (cq == 0) continue;
                std::int64_t c = cq.get_num().get_si() % pr;
                if (c % pr == 0) continue;
                bool lone = true;
                for (const auto& [mono, cc] : act[ei].p.terms()) {
                    if (mono == lin) continue;
                    if (mono[v] != 0) {
                        lone = false;
                        break;
                    }
                }
                if (!lone) continue;

                // x_v = -c^{-1} * (eq - c x_v) mod p^tt
                std::int64_t cfull = cq.get_num().get_si() % m_full;
                if (cfull < 0) cfull += m_full;
                std::int64_t cinv = mod_inv(cfull, m_full);
                Polynomial rest = act[ei].p;
                rest.set_coeff(lin, 0);
                Polynomial sub = reduce_mod(rest.scaled(mpq_class(-static_cast<long>(cinv))), m_full);

                std::vector<ModEq> rest_eqs;
                for (std::size_t j = 0; j < act.size(); ++j) {
                    if (j == ei) continue;
                    std::int64_t me = 1;
                    for (int i = 0; i < act[j].e; ++i) me *= pr;
                    rest_eqs.push_back({reduce_mod(act[j].p.substitute(v, sub), me), act[j].e});
                }
                std::vector<int> rest_vars;
                for (int w : vars)
                    if (w != v) rest_vars.push_back(w);

                std::int64_t a = count(rest_eqs, rest_vars, tt);
                // complement of the unit condition: substituted value = 0 mod p
                std::vector<ModEq> with_g = rest_eqs;
                with_g.push_back({reduce_mod(sub, pr), 1});
                std::int64_t b = count(std::move(with_g), rest_vars, tt);
                return a - b;
            }
        }

        // all equations mod p only: descend to t = 1 with a free-lift factor
        bool all_e1 = true;
        for (const auto& eq : act) all_e1 &= (eq.e == 1);
        if (all_e1 && tt > 1) {
            std::int64_t sub_count = count(act, vars, 1);
            long double bound = static_cast<long double>(sub_count);
            std::int64_t lift = 1;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                for (int j = 1; j < tt; ++j) {
                    lift *= pr;
                    bound *= static_cast<long double>(pr);
                }
            }
            if (bound > 9.0e18L)
                throw budget_error("nu_t: count exceeds 64-bit range", static_cast<double>(bound),
                                   9.0e18);
            return sub_count * lift;
        }

        // enumeration leaf
        const std::vector<std::int64_t> us = units(m_full);
        const std::int64_t usz = static_cast<std::int64_t>(us.size());
        long double work = 1;
        for (std::size_t i = 0; i < vars.size(); ++i) work *= static_cast<long double>(usz);
        work *= static_cast<long double>(act.size() + 1);
        if (static_cast<double>(work) > budget.max_ops)
            throw budget_error("nu_t: enumeration exceeds budget", static_cast<double>(work),
                               budget.max_ops);

        const int k = static_cast<int>(vars.size());
        std::int64_t total = 1;
        for (int i = 0; i < k; ++i) total *= usz;
        const int n = act.empty() ? 0 : act[0].p.n();
        // precompile for int64 modular evaluation
        std::vector<CompiledPoly> cps(act.size());
        std::vector<std::int64_t> mods(act.size());
        for (std::size_t i = 0; i < act.size(); ++i) {
            if (!compile_poly(act[i].p, m_full, cps[i]))
                throw internal_error("nu_t: compile failed on reduced polynomial");
            std::int64_t me = 1;
            for (int j = 0; j < act[i].e; ++j) me *= pr;
            mods[i] = me;
        }
        return chunked_count(total, [&](std::int64_t idx) {
            std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
            std::int64_t rem = idx;
            for (int i = 0; i < k; ++i) {
                x[static_cast<std::size_t>(vars[static_cast<std::size_t>(i)])] =
                    us[static_cast<std::size_t>(rem % usz)];
                rem /= usz;
            }
            for (std::size_t i = 0; i < act.size(); ++i) {
                i128 v = cps[i].eval(x.data());
                if (static_cast<std::int64_t>(((v % mods[i]) + mods[i]) % mods[i]) != 0) return false;
            }
            return true;
        });
    }
};

}  // namespace

std::int64_t nu_t(const PolySystem& s, std::int64_t p, int t, const work_budget& budget) {
    if (p < 2) throw validation_error("nu_t: p must be a prime >= 2");
    if (t < 1) throw validation_error("nu_t: t must be >= 1");
    if (!s.all_integer()) throw validation_error("nu_t: system must have integer coefficients");
    long double mf = 1;
    for (int i = 0; i < t; ++i) mf *= static_cast<long double>(p);
    if (mf > 2.0e9L) throw validation_error("nu_t: p^t too large (must fit 31 bits)");

    std::vector<ModEq> eqs;
    for (const auto& [ell, poly] : s.entries()) eqs.push_back({poly, t});
    std::vector<int> vars(s.n());
    std::iota(vars.begin(), vars.end(), 0);
    UnitCounter uc{p, t, budget};
    return uc.count(std::move(eqs), std::move(vars), t);
}

// ----------------------------------------------------------------------------
// integer box counts

namespace {

std::int64_t box_count(const PolySystem& s, std::int64_t X, std::int64_t lo,
                       const work_budget& budget, const char* opname) {
    if (X < 0) throw validation_error(std::string(opname) + ": X must be >= 0");
    const int n = s.n();
    const std::int64_t side = X - lo + 1;

    LinearPivot pivot;
    bool has_pivot = find_pivot(s, pivot);
    double grid_cost = std::pow(static_cast<double>(side), n) * (s.R() + 1);
    double pivot_cost = has_pivot ? std::pow(static_cast<double>(side), n - 1) * (s.R() + 1) : grid_cost;
    bool use_pivot = has_pivot && pivot_cost < grid_cost;
    budget.check(opname, use_pivot ? pivot_cost : grid_cost);

    CompiledSystem cs = CompiledSystem::build(s, std::max(std::abs(lo), std::abs(X)));
    std::vector<int> free_vars;
    for (int i = 0; i < n; ++i)
        if (!use_pivot || i != pivot.var) free_vars.push_back(i);
    const int k = static_cast<int>(free_vars.size());
    std::int64_t total = 1;
    for (int i = 0; i < k; ++i) total *= side;

    return chunked_count(total, [&](std::int64_t idx) {
        std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
        std::int64_t rem = idx;
        for (int i = 0; i < k; ++i) {
            x[static_cast<std::size_t>(free_vars[static_cast<std::size_t>(i)])] = lo + rem % side;
            rem /= side;
        }
        if (use_pivot) {
            i128 num = -pivot.rest(x.data(), n);
            if (num % pivot.c != 0) return false;
            i128 sol = num / pivot.c;
            if (sol < lo || sol > X) return false;
            x[static_cast<std::size_t>(pivot.var)] = static_cast<std::int64_t>(sol);
        }
        return cs.ok ? cs.all_zero(x.data()) : all_zero_mpq(s, x);
    });
}

}  // namespace

std::int64_t integer_count(const PolySystem& s, std::int64_t X, const work_budget& budget) {
    return box_count(s, X, -X, budget, "integer_count");
}

std::int64_t integer_count_positive(const PolySystem& s, std::int64_t X, const work_budget& budget) {
    return box_count(s, X, 0, budget, "integer_count_positive");
}

}  // namespace hlprime
