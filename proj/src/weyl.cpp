#include "hlprime/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace hlprime {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// fractional part of an exact rational, in [0,1), as a double
double frac_part(const mpq_class& v) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
    mpq_class f(r, v.get_den());
    f.canonicalize();
    return f.get_d();
}

std::complex<double> unit_phase(const mpq_class& v) {
    double t = two_pi * frac_part(v);
    return {std::cos(t), std::sin(t)};
}

void validate_points(const Polynomial& G,
                     const std::vector<std::vector<std::int64_t>>& points,
                     const char* who) {
    if (points.empty())
        throw validation_error(std::string(who) + ": at least one argument vector required");
    if (points.size() > 20)
        throw validation_error(std::string(who) + ": order too large");
    for (const auto& p : points)
        if (static_cast<int>(p.size()) != G.n())
            throw validation_error(std::string(who) + ": dimension mismatch, argument length " +
                                   std::to_string(p.size()) + " against n = " +
                                   std::to_string(G.n()));
}

// forms must be homogeneous of one common degree l >= 2; returns l
int validate_forms(const std::vector<Polynomial>& forms, const char* who) {
    const int ell = forms[0].degree();
    if (ell < 2)
        throw validation_error(std::string(who) + ": forms must have degree at least 2");
    for (const auto& f : forms) {
        if (f.n() != forms[0].n())
            throw validation_error(std::string(who) + ": dimension mismatch between forms");
        if (f.degree() != ell)
            throw validation_error(std::string(who) + ": forms of unequal degree");
        if (!(f.homogeneous_part(ell) == f))
            throw validation_error(std::string(who) + ": inhomogeneous input form");
    }
    return ell;
}

// rank over Q of an integer matrix by fraction-free (Bareiss) elimination
int rank_fraction_free(std::vector<std::vector<mpz_class>>& m) {
    const int rows = static_cast<int>(m.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(m[0].size());
    mpz_class prev = 1;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(piv)]);
        const auto& pr = m[static_cast<std::size_t>(r)];
        for (int i = r + 1; i < rows; ++i) {
            auto& ri = m[static_cast<std::size_t>(i)];
            for (int j = c + 1; j < cols; ++j) {
                mpz_class t = pr[static_cast<std::size_t>(c)] * ri[static_cast<std::size_t>(j)] -
                              ri[static_cast<std::size_t>(c)] * pr[static_cast<std::size_t>(j)];
                mpz_class q, rem;
                mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                if (rem != 0) throw internal_error("fraction-free elimination: inexact division");
                ri[static_cast<std::size_t>(j)] = q;
            }
            ri[static_cast<std::size_t>(c)] = 0;
        }
        prev = pr[static_cast<std::size_t>(c)];
        ++r;
    }
    return r;
}

}  // namespace

// ----------------------------------------------------------------------------

mpq_class gamma_operator(const Polynomial& G,
                         const std::vector<std::vector<std::int64_t>>& points) {
    validate_points(G, points, "gamma_operator");
    const int ell = static_cast<int>(points.size());
    const int n = G.n();
    mpq_class acc = 0;
    std::vector<std::int64_t> arg(static_cast<std::size_t>(n));
    for (std::uint32_t mask = 0; mask < (1u << ell); ++mask) {
        std::fill(arg.begin(), arg.end(), 0);
        for (int i = 0; i < ell; ++i)
            if (mask & (1u << i))
                for (int j = 0; j < n; ++j)
                    arg[static_cast<std::size_t>(j)] +=
                        points[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        mpq_class v = G.evaluate_int(arg);
        if (__builtin_popcount(mask) & 1)
            acc -= v;
        else
            acc += v;
    }
    return acc;
}

GammaEval gamma_eval(const Polynomial& G,
                     const std::vector<std::vector<std::int64_t>>& points) {
    GammaEval out;
    out.ell = static_cast<int>(points.size());
    out.points = points;
    out.value = gamma_operator(G, points);
    return out;
}

Polynomial gamma_polynomial(const Polynomial& G, int ell) {
    if (ell < 1 || ell > 20) throw validation_error("gamma_polynomial: order out of range");
    const int n = G.n();
    const int N = ell * n;
    Polynomial acc(N);
    for (std::uint32_t mask = 0; mask < (1u << ell); ++mask) {
        // expansion of G(sum of the selected argument vectors)
        Polynomial part(N);
        for (const auto& [e, c] : G.terms()) {
            Polynomial prod(N);
            prod.set_coeff(Exponents(static_cast<std::size_t>(N), 0), c);
            for (int j = 0; j < n; ++j) {
                if (e[static_cast<std::size_t>(j)] == 0) continue;
                Polynomial linj(N);
                for (int i = 0; i < ell; ++i)
                    if (mask & (1u << i)) {
                        Exponents v(static_cast<std::size_t>(N), 0);
                        v[static_cast<std::size_t>(i * n + j)] = 1;
                        linj.add_term(v, 1);
                    }
                for (std::uint32_t k = 0; k < e[static_cast<std::size_t>(j)]; ++k)
                    prod = prod * linj;
            }
            part += prod;
        }
        if (__builtin_popcount(mask) & 1)
            acc -= part;
        else
            acc += part;
    }
    return acc;
}

QMatrix m_matrix(const std::vector<Polynomial>& forms,
                 const std::vector<std::vector<std::int64_t>>& tuple) {
    if (forms.empty()) throw validation_error("m_matrix: empty form list");
    const int ell = validate_forms(forms, "m_matrix");
    const int n = forms[0].n();
    if (static_cast<int>(tuple.size()) != ell - 1)
        throw validation_error("m_matrix: tuple must have " + std::to_string(ell - 1) +
                               " vectors, got " + std::to_string(tuple.size()));
    for (const auto& v : tuple)
        if (static_cast<int>(v.size()) != n)
            throw validation_error("m_matrix: dimension mismatch in tuple");

    QMatrix m(static_cast<int>(forms.size()), n);
    std::vector<std::vector<std::int64_t>> args = tuple;
    args.emplace_back(static_cast<std::size_t>(n), 0);
    for (int r = 0; r < m.rows; ++r)
        for (int i = 0; i < n; ++i) {
            std::fill(args.back().begin(), args.back().end(), 0);
            args.back()[static_cast<std::size_t>(i)] = 1;
            m.at(r, i) = gamma_operator(forms[static_cast<std::size_t>(r)], args);
        }
    return m;
}

std::int64_t z_count(const std::vector<Polynomial>& forms, std::int64_t R0,
                     const work_budget& budget) {
    if (R0 < 0) throw validation_error("z_count: negative radius");
    if (forms.empty()) return 0;  // rank 0 < 0 never holds
    const int ell = validate_forms(forms, "z_count");
    const int n = forms[0].n();
    const int r = static_cast<int>(forms.size());
    const int coords = n * (ell - 1);

    const double side = static_cast<double>(2 * R0 + 1);
    double tuples = 1.0;
    for (int i = 0; i < coords; ++i) tuples *= side;
    if (tuples > 1.0e8)
        throw budget_error("z_count: tuple box exceeds the exhaustive enumeration guard", tuples,
                           1.0e8);

    // integer-cleared forms keep every matrix entry in Z (row scaling by the
    // denominator lcm leaves the rank unchanged)
    std::vector<Polynomial> gam;
    double gamma_terms = 0.0;
    for (const auto& f : forms) {
        Polynomial g = f.scaled(f.denominator_lcm());
        gam.push_back(gamma_polynomial(g, ell));
        gamma_terms += static_cast<double>(gam.back().terms().size());
    }
    budget.check("z_count",
                 tuples * (static_cast<double>(n) * gamma_terms +
                           static_cast<double>(r) * r * n));

    const std::int64_t total = static_cast<std::int64_t>(tuples + 0.5);
    const std::int64_t m2 = 2 * R0 + 1;
    return chunked_count(total, [&](std::int64_t idx) {
        std::vector<std::int64_t> x(static_cast<std::size_t>(ell * n), 0);
        std::int64_t t = idx;
        for (int k = 0; k < coords; ++k) {
            x[static_cast<std::size_t>(k)] = t % m2 - R0;
            t /= m2;
        }
        std::vector<std::vector<mpz_class>> mat(
            static_cast<std::size_t>(r), std::vector<mpz_class>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i) {
            // last argument block set to e_i
            for (int j = 0; j < n; ++j)
                x[static_cast<std::size_t>((ell - 1) * n + j)] = (j == i) ? 1 : 0;
            for (int f = 0; f < r; ++f) {
                mpq_class v = gam[static_cast<std::size_t>(f)].evaluate_int(x);
                mat[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)] = v.get_num();
            }
        }
        return rank_fraction_free(mat) < r;
    });
}

GFit g_estimate(const std::vector<Polynomial>& forms,
                const std::vector<std::int64_t>& radii,
                const work_budget& budget) {
    if (radii.size() < 3) throw validation_error("g_estimate: at least three radii required");
    for (std::int64_t r0 : radii)
        if (r0 < 1) throw validation_error("g_estimate: radii must be positive");

    GFit fit;
    fit.radii = radii;
    for (std::int64_t r0 : radii) fit.counts.push_back(z_count(forms, r0, budget));

    const int r = static_cast<int>(forms.size());
    const bool all_zero =
        std::all_of(fit.counts.begin(), fit.counts.end(), [](std::int64_t z) { return z == 0; });
    if (all_zero) {
        fit.g_infinite = true;
        fit.fitted_g = std::numeric_limits<double>::infinity();
        fit.gamma = 0.0;
        fit.gamma_prime = 0.0;
        fit.note = r == 0 ? "empty form group, gamma = 0 by convention"
                          : "no rank-deficient tuples at any radius; gamma = 0";
        return fit;
    }

    const int ell = validate_forms(forms, "g_estimate");
    const int n = forms[0].n();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (fit.counts[i] == 0) continue;
        double lx = std::log(static_cast<double>(radii[i]));
        double ly = std::log(static_cast<double>(fit.counts[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) throw validation_error("g_estimate: degenerate fit, fewer than two nonzero counts");
    const double det = m * sxx - sx * sx;
    if (std::abs(det) < 1e-12) throw validation_error("g_estimate: degenerate fit, radii coincide");
    const double slope = (m * sxy - sx * sy) / det;
    fit.fitted_g = static_cast<double>(n) * (ell - 1) - slope;

    if (fit.fitted_g > 0) {
        fit.gamma = std::ldexp(1.0, ell - 1) * (ell - 1) * r / fit.fitted_g;
        fit.gamma_prime = std::ldexp(1.0, ell - 1) / fit.fitted_g;
        fit.note = "finite-radius fit over " + std::to_string(radii.size()) + " radii";
    } else {
        fit.gamma = std::numeric_limits<double>::infinity();
        fit.gamma_prime = std::numeric_limits<double>::infinity();
        fit.note =
            "fitted g is nonpositive at these radii; a finite fit cannot distinguish g = 0 "
            "from small positive g, treat gamma as unreliable";
    }
    return fit;
}

// ----------------------------------------------------------------------------

double differencing_identity_check(const Polynomial& G, std::int64_t P,
                                   const work_budget& budget) {
    const int n = G.n();
    if (n < 1 || n > 2)
        throw validation_error("differencing_identity_check: supported for n <= 2");
    if (P < 1 || P > 200)
        throw validation_error("differencing_identity_check: P must lie in [1, 200]");
    double box = 1.0;
    for (int i = 0; i < n; ++i) box *= static_cast<double>(P + 1);
    budget.check("differencing_identity_check",
                 box * box * static_cast<double>(G.terms().size() + 2));

    // direct sum over the box
    kahan_sum sre, sim;
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
    for (;;) {
        std::complex<double> ph = unit_phase(G.evaluate_int(x));
        sre.add(ph.real());
        sim.add(ph.imag());
        int i = 0;
        while (i < n && x[static_cast<std::size_t>(i)] == P) {
            x[static_cast<std::size_t>(i)] = 0;
            ++i;
        }
        if (i == n) break;
        ++x[static_cast<std::size_t>(i)];
    }
    const double lhs = sre.value() * sre.value() + sim.value() * sim.value();

    // differenced double sum: h over [-P,P]^n, x over the overlap box
    kahan_sum rre, rim;
    std::vector<std::int64_t> h(static_cast<std::size_t>(n), -P);
    std::vector<std::int64_t> xh(static_cast<std::size_t>(n));
    for (;;) {
        std::vector<std::int64_t> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            lo[static_cast<std::size_t>(i)] = std::max<std::int64_t>(0, -h[static_cast<std::size_t>(i)]);
            hi[static_cast<std::size_t>(i)] = std::min<std::int64_t>(P, P - h[static_cast<std::size_t>(i)]);
        }
        x = lo;
        for (;;) {
            for (int i = 0; i < n; ++i)
                xh[static_cast<std::size_t>(i)] =
                    x[static_cast<std::size_t>(i)] + h[static_cast<std::size_t>(i)];
            mpq_class diff = G.evaluate_int(xh) - G.evaluate_int(x);
            std::complex<double> ph = unit_phase(diff);
            rre.add(ph.real());
            rim.add(ph.imag());
            int i = 0;
            while (i < n && x[static_cast<std::size_t>(i)] == hi[static_cast<std::size_t>(i)]) {
                x[static_cast<std::size_t>(i)] = lo[static_cast<std::size_t>(i)];
                ++i;
            }
            if (i == n) break;
            ++x[static_cast<std::size_t>(i)];
        }
        int i = 0;
        while (i < n && h[static_cast<std::size_t>(i)] == P) {
            h[static_cast<std::size_t>(i)] = -P;
            ++i;
        }
        if (i == n) break;
        ++h[static_cast<std::size_t>(i)];
    }

    const std::complex<double> rhs(rre.value(), rim.value());
    return std::abs(std::complex<double>(lhs, 0.0) - rhs);
}

}  // namespace hlprime
