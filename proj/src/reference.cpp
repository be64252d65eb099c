#include "hlprime/reference.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "hlprime/qmatrix.hpp"
#include "hlprime/weyl.hpp"

namespace hlprime::ref {

namespace {

// serial odometer over {0..side-1}^n; returns false when exhausted
bool advance(std::vector<std::int64_t>& d, std::int64_t side) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (++d[i] < side) return true;
        d[i] = 0;
    }
    return false;
}

bool vanishes(const PolySystem& s, const std::vector<std::int64_t>& x) {
    for (const auto& [ell, p] : s.entries())
        if (p.evaluate_int(x) != 0) return false;
    return true;
}

}  // namespace

double weighted_count_grid(const PolySystem& s, std::int64_t X, const PrimeTable& pt) {
    const int n = s.n();
    std::vector<std::int64_t> d(static_cast<std::size_t>(n), 0);
    double sum = 0.0;
    do {
        double w = 1.0;
        for (std::int64_t xi : d) w *= pt.von_mangoldt(xi);
        if (w == 0.0) continue;
        if (vanishes(s, d)) sum += w;
    } while (advance(d, X + 1));
    return sum;
}

double prime_log_count_grid(const PolySystem& s, std::int64_t X, const PrimeTable& pt) {
    const int n = s.n();
    std::vector<std::int64_t> d(static_cast<std::size_t>(n), 0);
    double sum = 0.0;
    do {
        double w = 1.0;
        for (std::int64_t xi : d) w *= pt.is_prime(xi) ? std::log(static_cast<double>(xi)) : 0.0;
        if (w == 0.0) continue;
        if (vanishes(s, d)) sum += w;
    } while (advance(d, X + 1));
    return sum;
}

std::int64_t nu_t_enum(const PolySystem& s, std::int64_t p, int t) {
    std::int64_t m = 1;
    for (int i = 0; i < t; ++i) m *= p;
    const std::vector<std::int64_t> us = units(m);
    const std::int64_t usz = static_cast<std::int64_t>(us.size());
    const int n = s.n();

    std::vector<std::int64_t> digit(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
    std::int64_t count = 0;
    do {
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = us[static_cast<std::size_t>(digit[static_cast<std::size_t>(i)])];
        bool ok = true;
        for (const auto& [ell, poly] : s.entries()) {
            mpz_class v = poly.evaluate_int(x).get_num();
            if (v % m != 0) {
                ok = false;
                break;
            }
        }
        if (ok) ++count;
    } while (advance(digit, usz));
    return count;
}

namespace {

std::int64_t box_grid(const PolySystem& s, std::int64_t X, std::int64_t lo) {
    const std::int64_t side = X - lo + 1;
    std::vector<std::int64_t> d(static_cast<std::size_t>(s.n()), 0);
    std::vector<std::int64_t> x(static_cast<std::size_t>(s.n()), 0);
    std::int64_t count = 0;
    do {
        for (std::size_t i = 0; i < d.size(); ++i) x[i] = lo + d[i];
        if (vanishes(s, x)) ++count;
    } while (advance(d, side));
    return count;
}

}  // namespace

std::int64_t integer_count_grid(const PolySystem& s, std::int64_t X) {
    return box_grid(s, X, -X);
}

std::int64_t integer_count_grid_positive(const PolySystem& s, std::int64_t X) {
    return box_grid(s, X, 0);
}

std::complex<double> gauss_sum_direct(const PolySystem& s, const std::vector<std::int64_t>& a,
                                      std::int64_t q) {
    if (static_cast<int>(a.size()) != s.R())
        throw validation_error("gauss_sum: coefficient tuple length must equal R");
    if (q < 1) throw validation_error("gauss_sum: q must be >= 1");
    const std::vector<std::int64_t> us = units(q);
    const std::int64_t usz = static_cast<std::int64_t>(us.size());
    const int n = s.n();

    std::vector<std::int64_t> digit(static_cast<std::size_t>(n), 0);
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), 0);
    std::complex<double> sum = 0.0;
    do {
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = us[static_cast<std::size_t>(digit[static_cast<std::size_t>(i)])];
        mpz_class phase = 0;
        std::size_t j = 0;
        for (const auto& [ell, poly] : s.entries())
            phase += a[j++] * poly.evaluate_int(x).get_num();
        mpz_class r = phase % q;
        sum += e_frac(r.get_si(), q);
    } while (advance(digit, usz));
    return sum;
}

double b_of_q_direct(const PolySystem& s, std::int64_t q) {
    if (q < 1) throw validation_error("b_of_q: q must be >= 1");
    const int R = s.R();
    const int n = s.n();
    double phi = static_cast<double>(euler_phi(q));

    std::vector<std::int64_t> a(static_cast<std::size_t>(R), 0);
    std::complex<double> total = 0.0;
    do {
        std::int64_t g = q;
        for (std::int64_t ai : a) g = std::gcd(g, ai);
        if (g != 1) continue;
        total += gauss_sum_direct(s, a, q);
    } while (advance(a, q));
    double scale = std::pow(phi, -n);
    return (total * scale).real();
}

std::int64_t z_count_rational(const std::vector<Polynomial>& forms, std::int64_t R0) {
    if (R0 < 0) throw validation_error("z_count: negative radius");
    if (forms.empty()) return 0;
    const int r = static_cast<int>(forms.size());
    const int ell = forms[0].degree();
    const int n = forms[0].n();
    const int coords = n * (ell - 1);

    std::vector<std::int64_t> digit(static_cast<std::size_t>(coords), 0);
    std::vector<std::vector<std::int64_t>> tuple(
        static_cast<std::size_t>(ell - 1), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
    std::int64_t count = 0;
    do {
        for (int k = 0; k < coords; ++k)
            tuple[static_cast<std::size_t>(k / n)][static_cast<std::size_t>(k % n)] =
                digit[static_cast<std::size_t>(k)] - R0;
        if (rank(m_matrix(forms, tuple)) < r) ++count;
    } while (advance(digit, 2 * R0 + 1));
    return count;
}

}  // namespace hlprime::ref
