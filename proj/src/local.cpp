#include "hlprime/local.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hlprime/arith.hpp"
#include "hlprime/counting.hpp"

namespace hlprime {

namespace {

bool is_prime_trial(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t q) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % q);
}

// polynomial with coefficients reduced into [0, q), evaluated mod q
struct ModPoly {
    struct Term {
        std::vector<std::uint32_t> e;
        std::int64_t c;
    };
    std::vector<Term> terms;

    static ModPoly from(const Polynomial& p, std::int64_t q) {
        ModPoly out;
        for (const auto& [e, c] : p.terms()) {
            std::int64_t r = static_cast<std::int64_t>(
                mpz_fdiv_ui(c.get_num().get_mpz_t(), static_cast<unsigned long>(q)));
            if (r != 0) out.terms.push_back({e, r});
        }
        return out;
    }

    std::int64_t eval(const std::vector<std::int64_t>& x, std::int64_t q) const {
        std::int64_t acc = 0;
        for (const auto& t : this->terms) {
            std::int64_t v = t.c;
            for (std::size_t j = 0; j < t.e.size(); ++j)
                for (std::uint32_t k = 0; k < t.e[j]; ++k) v = mulmod(v, x[j], q);
            acc = (acc + v) % q;
        }
        return acc;
    }
};

void require_integer(const PolySystem& s, const char* who) {
    if (!s.all_integer())
        throw validation_error(std::string(who) + ": integer coefficients required");
}

// row-echelon rank of an R x n matrix over F_p
int rank_mod_p(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(m[0].size());
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] % p != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(piv)]);
        // scale the pivot row to 1 via Fermat inverse
        std::int64_t inv = 1, base = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] % p,
                     e = p - 2;
        base = (base % p + p) % p;
        while (e > 0) {
            if (e & 1) inv = mulmod(inv, base, p);
            base = mulmod(base, base, p);
            e >>= 1;
        }
        for (int j = c; j < cols; ++j) {
            auto& v = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
            v = mulmod(((v % p) + p) % p, inv, p);
        }
        for (int i = r + 1; i < rows; ++i) {
            std::int64_t f = ((m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] % p) + p) % p;
            if (f == 0) continue;
            for (int j = c; j < cols; ++j) {
                auto& v = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                v = ((v - mulmod(f, m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)], p)) % p + p) % p;
            }
        }
        ++r;
    }
    return r;
}

}  // namespace

// ----------------------------------------------------------------------------

std::complex<double> gauss_sum(const PolySystem& s, const std::vector<std::int64_t>& a,
                               std::int64_t q, const work_budget& budget) {
    require_integer(s, "gauss_sum");
    if (q < 1) throw validation_error("gauss_sum: modulus must be >= 1");
    if (static_cast<int>(a.size()) != s.R())
        throw validation_error("gauss_sum: coefficient tuple length " + std::to_string(a.size()) +
                               " must equal R = " + std::to_string(s.R()));
    const int n = s.n();
    const std::vector<std::int64_t> us = units(q);
    const std::int64_t usz = static_cast<std::int64_t>(us.size());

    double tuples = 1.0, terms = 0.0;
    for (int i = 0; i < n; ++i) tuples *= static_cast<double>(usz);
    for (const auto& [ell, poly] : s.entries()) terms += static_cast<double>(poly.terms().size());
    budget.check("gauss_sum", tuples * (terms + static_cast<double>(n)));
    const std::int64_t total = static_cast<std::int64_t>(tuples + 0.5);

    // absorb a into the reduced coefficients: phase = sum_j a_j f_j(k) mod q
    std::vector<ModPoly> mp;
    {
        std::size_t j = 0;
        for (const auto& [ell, poly] : s.entries()) {
            std::int64_t aj = ((a[j] % q) + q) % q;
            ++j;
            if (aj == 0) continue;
            Polynomial scaled = poly.scaled(aj);
            mp.push_back(ModPoly::from(scaled, q));
        }
    }

    // deterministic chunked complex accumulation, merged in chunk order
    const std::int64_t chunks = total < 1024 ? total : 1024;
    std::vector<double> pre(static_cast<std::size_t>(chunks), 0.0);
    std::vector<double> pim(static_cast<std::size_t>(chunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        std::int64_t lo = total * ci / chunks;
        std::int64_t hi = total * (ci + 1) / chunks;
        kahan_sum re, im;
        std::vector<std::int64_t> x(static_cast<std::size_t>(n));
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            std::int64_t t = idx;
            for (int i = 0; i < n; ++i) {
                x[static_cast<std::size_t>(i)] = us[static_cast<std::size_t>(t % usz)];
                t /= usz;
            }
            std::int64_t phase = 0;
            for (const auto& f : mp) phase = (phase + f.eval(x, q)) % q;
            std::complex<double> ph = e_frac(phase, q);
            re.add(ph.real());
            im.add(ph.imag());
        }
        pre[static_cast<std::size_t>(ci)] = re.value();
        pim[static_cast<std::size_t>(ci)] = im.value();
    }
    kahan_sum re, im;
    for (std::int64_t ci = 0; ci < chunks; ++ci) {
        re.add(pre[static_cast<std::size_t>(ci)]);
        im.add(pim[static_cast<std::size_t>(ci)]);
    }
    return {re.value(), im.value()};
}

std::complex<double> b_of_q(const PolySystem& s, std::int64_t q, const work_budget& budget) {
    require_integer(s, "b_of_q");
    if (q < 1) throw validation_error("b_of_q: modulus must be >= 1");
    if (q == 1) return {1.0, 0.0};  // a = 0 is primitive mod 1, S = 1
    const int n = s.n();
    const int R = s.R();
    if (R == 0) return {0.0, 0.0};  // no primitive residue vector mod q > 1

    const std::vector<std::int64_t> us = units(q);
    const std::int64_t usz = static_cast<std::int64_t>(us.size());
    double tuples = 1.0;
    for (int i = 0; i < n; ++i) tuples *= static_cast<double>(usz);
    double cells = 1.0;
    for (int i = 0; i < R; ++i) cells *= static_cast<double>(q);
    double terms = 0.0;
    for (const auto& [ell, poly] : s.entries()) terms += static_cast<double>(poly.terms().size());
    budget.check("b_of_q", tuples * (terms + n) + static_cast<double>(R) * cells * q + cells);
    const std::int64_t total = static_cast<std::int64_t>(tuples + 0.5);
    const std::int64_t ncells = static_cast<std::int64_t>(cells + 0.5);

    std::vector<ModPoly> mp;
    for (const auto& [ell, poly] : s.entries()) mp.push_back(ModPoly::from(poly, q));

    // histogram of value vectors f(k) mod q over the unit tuples
    std::vector<std::int64_t> hist(static_cast<std::size_t>(ncells), 0);
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<std::int64_t> local(hist.size(), 0);
        std::vector<std::int64_t> x(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp for schedule(static) nowait
#endif
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::int64_t t = idx;
            for (int i = 0; i < n; ++i) {
                x[static_cast<std::size_t>(i)] = us[static_cast<std::size_t>(t % usz)];
                t /= usz;
            }
            std::int64_t cell = 0;
            for (std::size_t j = mp.size(); j-- > 0;) cell = cell * q + mp[j].eval(x, q);
            ++local[static_cast<std::size_t>(cell)];
        }
#ifdef _OPENMP
#pragma omp critical
#endif
        for (std::size_t i = 0; i < hist.size(); ++i) hist[static_cast<std::size_t>(i)] += local[i];
    }

    // forward transform along each coefficient axis: after all R axes the
    // cell indexed by a holds S_{a,q}
    std::vector<std::complex<double>> w(static_cast<std::size_t>(q));
    for (std::int64_t k = 0; k < q; ++k) w[static_cast<std::size_t>(k)] = e_frac(k, q);
    std::vector<std::complex<double>> grid(hist.begin(), hist.end());
    std::vector<std::complex<double>> line(static_cast<std::size_t>(q));
    std::int64_t stride = 1;
    for (int axis = 0; axis < R; ++axis) {
        const std::int64_t block = stride * q;
        for (std::int64_t base = 0; base < ncells; base += block)
            for (std::int64_t off = 0; off < stride; ++off) {
                for (std::int64_t v = 0; v < q; ++v)
                    line[static_cast<std::size_t>(v)] =
                        grid[static_cast<std::size_t>(base + off + v * stride)];
                for (std::int64_t aa = 0; aa < q; ++aa) {
                    std::complex<double> acc = 0.0;
                    for (std::int64_t v = 0; v < q; ++v)
                        acc += line[static_cast<std::size_t>(v)] *
                               w[static_cast<std::size_t>(aa * v % q)];
                    grid[static_cast<std::size_t>(base + off + aa * stride)] = acc;
                }
            }
        stride = block;
    }

    // sum over primitive a, scaled by phi(q)^{-n}
    kahan_sum re, im;
    std::vector<std::int64_t> a(static_cast<std::size_t>(R));
    for (std::int64_t cell = 0; cell < ncells; ++cell) {
        std::int64_t t = cell;
        std::int64_t g = q;
        for (int i = 0; i < R; ++i) {
            g = std::gcd(g, t % q);
            t /= q;
        }
        if (g != 1) continue;
        re.add(grid[static_cast<std::size_t>(cell)].real());
        im.add(grid[static_cast<std::size_t>(cell)].imag());
    }
    const double scale = std::pow(static_cast<double>(usz), -n);
    return {re.value() * scale, im.value() * scale};
}

// ----------------------------------------------------------------------------

LocalProfile mu_p(const PolySystem& s, std::int64_t p, int t_max, const work_budget& budget) {
    require_integer(s, "mu_p");
    if (!is_prime_trial(p)) throw validation_error("mu_p: p must be prime");
    if (t_max < 1) throw validation_error("mu_p: t_max must be >= 1");

    LocalProfile prof;
    prof.p = p;
    const int n = s.n();
    const int R = s.R();

    double bsum = 0.0;
    bool b_ok = true;
    double prev_v = 0.0;
    std::int64_t pt = 1;
    for (int t = 1; t <= t_max; ++t) {
        if (pt > 2000000000 / p) break;  // modulus out of the nu_t range
        pt *= p;
        std::int64_t nu;
        try {
            nu = nu_t(s, p, t, budget);
        } catch (const budget_error&) {
            if (t == 1) throw;
            break;
        }
        const double phi = static_cast<double>(pt - pt / p);
        const double v = std::pow(static_cast<double>(p), static_cast<double>(t) * R) *
                         static_cast<double>(nu) / std::pow(phi, n);

        LocalProfile::Partial part;
        part.t = t;
        part.nu = nu;
        part.nu_route = v;
        if (b_ok) {
            // the B route is a cross-check, not the answer; cap it well below the
            // caller's budget so scans over many primes stay fast
            work_budget diag;
            diag.max_ops = std::min(budget.max_ops, 2.0e6);
            try {
                bsum += b_of_q(s, pt, diag).real();
                part.b_route = 1.0 + bsum;
                part.b_route_computed = true;
            } catch (const budget_error&) {
                b_ok = false;
            }
        }
        prof.partials.push_back(part);

        if (nu == 0) {
            prof.obstruction = true;
            prof.mu_p = 0.0;
            prof.stabilized_at = t;
            return prof;
        }
        if (t >= 2 && std::abs(v - prev_v) < 1e-9) {
            prof.stabilized_at = t - 1;
            prof.mu_p = v;
            return prof;
        }
        prev_v = v;
        prof.mu_p = v;
    }
    prof.stabilized_at = -1;  // caller decides what to do
    return prof;
}

SingularData sigma_truncated(const PolySystem& s, std::int64_t p_max, int t_max,
                             const work_budget& budget) {
    require_integer(s, "sigma_truncated");
    if (p_max < 2) throw validation_error("sigma_truncated: p_max must be >= 2");

    SingularData out;
    out.p_max = p_max;
    PrimeTable pt(p_max);

    double product = 1.0;
    for (std::int64_t p : pt.primes()) {
        LocalProfile prof = mu_p(s, p, t_max, budget);
        if (prof.stabilized_at < 0)
            throw validation_error("sigma_truncated: mu(p) did not stabilize within t_max at p = " +
                                   std::to_string(p));
        out.factors.emplace_back(p, prof.mu_p);
        if (prof.obstruction) out.obstructions.push_back(p);
        product *= prof.mu_p;
    }
    out.sigma_truncated = product;

    if (!out.obstructions.empty() || product == 0.0) {
        out.tail_bound = 0.0;  // a zero factor pins the full product at zero
        return out;
    }

    // heuristic tail: fit |mu(p) - 1| ~ c / p^2 on the last decade of primes,
    // then sum c / p^2 beyond p_max as c / (p_max log p_max)
    double c = 0.0;
    for (const auto& [p, mu] : out.factors) {
        if (p * 10 < p_max) continue;
        double cp = std::abs(mu - 1.0) * static_cast<double>(p) * static_cast<double>(p);
        c = std::max(c, cp);
    }
    out.tail_bound = c / (static_cast<double>(p_max) * std::log(static_cast<double>(p_max)));
    return out;
}

// ----------------------------------------------------------------------------

const char* to_string(HenselVerdict v) {
    switch (v) {
        case HenselVerdict::yes: return "yes";
        case HenselVerdict::no: return "no";
        default: return "unknown";
    }
}

HenselVerdict hensel_unit_check(const PolySystem& s, std::int64_t p, const work_budget& budget) {
    require_integer(s, "hensel_unit_check");
    if (!is_prime_trial(p)) throw validation_error("hensel_unit_check: p must be prime");
    const int n = s.n();
    const int R = s.R();

    double tuples = 1.0, terms = 0.0;
    for (int i = 0; i < n; ++i) tuples *= static_cast<double>(p - 1);
    for (const auto& [ell, poly] : s.entries()) terms += static_cast<double>(poly.terms().size());
    budget.check("hensel_unit_check",
                 tuples * (terms + static_cast<double>(R) * n * (terms + 1)));

    std::vector<ModPoly> mp;
    std::vector<std::vector<ModPoly>> jac;  // jac[r][j] = d f_r / d x_j mod p
    for (const auto& [ell, poly] : s.entries()) {
        mp.push_back(ModPoly::from(poly, p));
        std::vector<ModPoly> row;
        for (int j = 0; j < n; ++j) row.push_back(ModPoly::from(poly.derivative(j), p));
        jac.push_back(std::move(row));
    }
    if (R == 0) return HenselVerdict::yes;  // empty system, rank 0 everywhere

    bool any_candidate = false;
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), 1);
    for (;;) {
        bool zero = true;
        for (const auto& f : mp)
            if (f.eval(x, p) != 0) {
                zero = false;
                break;
            }
        if (zero) {
            any_candidate = true;
            std::vector<std::vector<std::int64_t>> J(static_cast<std::size_t>(R),
                                                     std::vector<std::int64_t>(static_cast<std::size_t>(n)));
            for (int r = 0; r < R; ++r)
                for (int j = 0; j < n; ++j)
                    J[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                        jac[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)].eval(x, p);
            if (rank_mod_p(J, p) == R) return HenselVerdict::yes;
        }
        int i = 0;
        while (i < n && x[static_cast<std::size_t>(i)] == p - 1) {
            x[static_cast<std::size_t>(i)] = 1;
            ++i;
        }
        if (i == n) break;
        ++x[static_cast<std::size_t>(i)];
    }
    return any_candidate ? HenselVerdict::unknown : HenselVerdict::no;
}

}  // namespace hlprime
