#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hlprime/arith.hpp"
#include "hlprime/local.hpp"
#include "hlprime/reference.hpp"

using namespace hlprime;

namespace {

Polynomial lin(int n, const std::vector<int>& c, long c0 = 0) {
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
        if (c[static_cast<std::size_t>(i)] == 0) continue;
        Exponents e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        p.add_term(e, c[static_cast<std::size_t>(i)]);
    }
    if (c0 != 0) p.add_term(Exponents(static_cast<std::size_t>(n), 0), c0);
    return p;
}

PolySystem ternary(long N) { return PolySystem(3, {{1, lin(3, {1, 1, 1}, -N)}}); }
PolySystem binary(long N) { return PolySystem(2, {{1, lin(2, {1, 1}, -N)}}); }

// random integer system, degrees 1..2, exact-degree entries
PolySystem random_system(std::mt19937& rng, int max_n, int max_r) {
    std::uniform_int_distribution<int> cd(-3, 3);
    for (;;) {
        int n = 1 + static_cast<int>(rng() % max_n);
        int R = 1 + static_cast<int>(rng() % max_r);
        std::vector<std::pair<int, Polynomial>> polys;
        bool ok = true;
        for (int k = 0; k < R; ++k) {
            int ell = 1 + static_cast<int>(rng() % 2);
            Polynomial p(n);
            bool top = false;
            Exponents e(static_cast<std::size_t>(n), 0);
            for (;;) {
                int td = static_cast<int>(total_degree(e));
                if (td <= ell) {
                    int c = cd(rng);
                    if (c != 0) {
                        p.add_term(e, c);
                        if (td == ell) top = true;
                    }
                }
                int i = 0;
                while (i < n && static_cast<int>(e[static_cast<std::size_t>(i)]) == ell) {
                    e[static_cast<std::size_t>(i)] = 0;
                    ++i;
                }
                if (i == n) break;
                ++e[static_cast<std::size_t>(i)];
            }
            if (!top) ok = false;
            if (ok) polys.emplace_back(ell, p);
        }
        if (ok) {
            int nn = polys[0].second.n();
            return PolySystem(nn, std::move(polys));
        }
    }
}

}  // namespace

TEST_SUITE_BEGIN("local");

TEST_CASE("complete sum of a single linear form mod 3") {
    PolySystem s(1, {{1, lin(1, {1})}});
    std::complex<double> v = gauss_sum(s, {1}, 3);
    CHECK(std::abs(v - std::complex<double>(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("zero coefficient vector counts the unit tuples") {
    PolySystem s = ternary(9);
    std::complex<double> v = gauss_sum(s, {0}, 5);
    CHECK(std::abs(v - std::complex<double>(64.0, 0.0)) < 1e-12);
}

TEST_CASE("negating the coefficients conjugates the sum") {
    std::mt19937 rng(201);
    for (int trial = 0; trial < 10; ++trial) {
        PolySystem s = random_system(rng, 2, 2);
        for (std::int64_t q : {5, 7, 12}) {
            std::vector<std::int64_t> a, na;
            for (int i = 0; i < s.R(); ++i) {
                std::int64_t ai = static_cast<std::int64_t>(rng() % q);
                a.push_back(ai);
                na.push_back((q - ai) % q);
            }
            std::complex<double> v = gauss_sum(s, a, q);
            std::complex<double> w = gauss_sum(s, na, q);
            CHECK(std::abs(v - std::conj(w)) < 1e-9);
            // trivial bound
            double phin = std::pow(static_cast<double>(euler_phi(q)), s.n());
            CHECK(std::abs(v) <= phin + 1e-9);
        }
    }
}

TEST_CASE("complete sums match the direct oracle") {
    std::mt19937 rng(202);
    for (int trial = 0; trial < 8; ++trial) {
        PolySystem s = random_system(rng, 2, 2);
        for (std::int64_t q : {4, 9, 10}) {
            std::vector<std::int64_t> a;
            for (int i = 0; i < s.R(); ++i) a.push_back(static_cast<std::int64_t>(rng() % q));
            std::complex<double> v = gauss_sum(s, a, q);
            std::complex<double> w = ref::gauss_sum_direct(s, a, q);
            CHECK(std::abs(v - w) < 1e-9);
        }
    }
}

TEST_CASE("sum validation") {
    PolySystem s = ternary(9);
    CHECK_THROWS_AS(gauss_sum(s, {1, 2}, 5), validation_error);
    CHECK_THROWS_AS(gauss_sum(s, {1}, 0), validation_error);
    CHECK_THROWS_AS(gauss_sum(s, {1}, 100003), budget_error);
}

// ----------------------------------------------------------------------------

TEST_CASE("B at the trivial modulus") {
    CHECK(b_of_q(ternary(9), 1).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ternary odd target at the even prime") {
    std::complex<double> v = b_of_q(ternary(9), 2);
    CHECK(std::abs(v - std::complex<double>(1.0, 0.0)) < 1e-9);
    // and the factor is exhausted at t = 1: B(4) = 0
    CHECK(std::abs(b_of_q(ternary(9), 4)) < 1e-9);
}

TEST_CASE("B is multiplicative over coprime moduli") {
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs = {
        {2, 3}, {3, 4}, {2, 9}, {4, 9}, {5, 4}, {12, 5}};
    for (PolySystem s : {ternary(9), ternary(15), binary(10)}) {
        for (auto [q1, q2] : pairs) {
            double lhs = b_of_q(s, q1 * q2).real();
            double rhs = b_of_q(s, q1).real() * b_of_q(s, q2).real();
            CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("B agrees with the direct oracle") {
    Polynomial circ(2);
    circ.add_term({2, 0}, 1);
    circ.add_term({0, 2}, 1);
    circ.add_term({0, 0}, -2);
    PolySystem q2(2, {{2, circ}});
    std::mt19937 rng(203);
    for (std::int64_t q : {2, 3, 4, 5, 6, 9}) {
        CHECK(std::abs(b_of_q(ternary(9), q).real() - ref::b_of_q_direct(ternary(9), q)) < 1e-9);
        CHECK(std::abs(b_of_q(binary(10), q).real() - ref::b_of_q_direct(binary(10), q)) < 1e-9);
        CHECK(std::abs(b_of_q(q2, q).real() - ref::b_of_q_direct(q2, q)) < 1e-9);
    }
    for (int trial = 0; trial < 5; ++trial) {
        PolySystem s = random_system(rng, 2, 2);
        for (std::int64_t q : {3, 4, 10})
            CHECK(std::abs(b_of_q(s, q).real() - ref::b_of_q_direct(s, q)) < 1e-9);
    }
}

TEST_CASE("imaginary parts cancel") {
    for (std::int64_t q : {2, 3, 4, 5, 6, 7, 8, 9, 12})
        CHECK(std::abs(b_of_q(ternary(21), q).imag()) < 1e-9);
}

TEST_CASE("empty systems have no primitive vectors past q = 1") {
    PolySystem s(2, {});
    CHECK(b_of_q(s, 1).real() == doctest::Approx(1.0));
    CHECK(std::abs(b_of_q(s, 5)) == 0.0);
    CHECK(std::abs(b_of_q(s, 12)) == 0.0);
}

TEST_CASE("B budget refusal") {
    CHECK_THROWS_AS(b_of_q(ternary(9), 10007), budget_error);
}

// ----------------------------------------------------------------------------

TEST_CASE("ternary odd target: density two at the even prime") {
    LocalProfile prof = mu_p(ternary(9), 2, 4);
    CHECK(prof.mu_p == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(prof.stabilized_at == 1);
    CHECK_FALSE(prof.obstruction);
    for (const auto& part : prof.partials) {
        CHECK(part.nu_route == doctest::Approx(2.0).epsilon(1e-12));
        if (part.b_route_computed)
            CHECK(std::abs(part.b_route - part.nu_route) < 1e-6);
    }
}

TEST_CASE("ternary even target: parity obstruction") {
    LocalProfile prof = mu_p(ternary(10), 2, 4);
    CHECK(prof.obstruction);
    CHECK(prof.mu_p == 0.0);
    CHECK(prof.partials.back().nu == 0);
}

TEST_CASE("ternary odd primes match the closed form") {
    // p dividing the target: 1 - 1/(p-1)^2; otherwise 1 + 1/(p-1)^3
    LocalProfile p3 = mu_p(ternary(9), 3, 4);
    CHECK(p3.mu_p == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(p3.stabilized_at == 1);
    for (std::int64_t p : {3, 5, 7}) {
        LocalProfile prof = mu_p(ternary(11), p, 4);
        double expect = 1.0 + 1.0 / std::pow(static_cast<double>(p - 1), 3);
        CHECK(prof.mu_p == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("binary targets match the closed form") {
    // p | N: 1 + 1/(p-1); p not dividing N: 1 - 1/(p-1)^2
    CHECK(mu_p(binary(10), 2, 4).mu_p == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mu_p(binary(10), 5, 4).mu_p == doctest::Approx(1.25).epsilon(1e-9));
    CHECK(mu_p(binary(10), 3, 4).mu_p == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("both routes agree on random systems") {
    std::mt19937 rng(204);
    int agreements = 0;
    for (int trial = 0; trial < 20; ++trial) {
        PolySystem s = random_system(rng, 3, 2);
        for (std::int64_t p : {2, 3, 5}) {
            LocalProfile prof = mu_p(s, p, 2);
            for (const auto& part : prof.partials) {
                if (!part.b_route_computed) continue;
                CHECK(std::abs(part.b_route - part.nu_route) <=
                      1e-6 * std::max(1.0, std::abs(part.nu_route)));
                ++agreements;
            }
        }
    }
    CHECK(agreements >= 60);
}

TEST_CASE("a square form does not stabilize by t_max 2") {
    Polynomial sq(2);
    sq.add_term({2, 0}, 1);
    sq.add_term({1, 1}, -2);
    sq.add_term({0, 2}, 1);
    PolySystem s(2, {{2, sq}});  // (x1 - x2)^2
    LocalProfile prof = mu_p(s, 3, 2);
    CHECK(prof.stabilized_at == -1);
    REQUIRE(prof.partials.size() == 2);
    CHECK(prof.partials[0].nu_route == doctest::Approx(1.5));
    CHECK(prof.partials[1].nu_route == doctest::Approx(4.5));
}

TEST_CASE("density validation") {
    CHECK_THROWS_AS(mu_p(ternary(9), 4, 2), validation_error);
    CHECK_THROWS_AS(mu_p(ternary(9), 3, 0), validation_error);
}

// ----------------------------------------------------------------------------

TEST_CASE("truncated product matches the closed form for an odd ternary target") {
    SingularData sd = sigma_truncated(ternary(9), 200, 4);
    PrimeTable pt(200);
    double expect = 1.0;
    for (std::int64_t p : pt.primes()) {
        if (p == 2)
            expect *= 2.0;
        else if (9 % p == 0)
            expect *= 1.0 - 1.0 / static_cast<double>((p - 1) * (p - 1));
        else
            expect *= 1.0 + 1.0 / std::pow(static_cast<double>(p - 1), 3);
    }
    CHECK(sd.sigma_truncated == doctest::Approx(expect).epsilon(1e-9));
    CHECK(sd.obstructions.empty());
    CHECK(sd.tail_bound > 0.0);
    CHECK(sd.tail_bound < 1e-3);
}

TEST_CASE("product route matches the modulus-sum route") {
    SingularData sd = sigma_truncated(ternary(9), 200, 4);
    double qsum = 0.0;
    for (std::int64_t q = 1; q <= 200; ++q) qsum += b_of_q(ternary(9), q).real();
    CHECK(std::abs(sd.sigma_truncated - qsum) < 1e-3);
}

TEST_CASE("even ternary target is obstructed at two") {
    SingularData sd = sigma_truncated(ternary(10), 50, 4);
    CHECK(sd.sigma_truncated == 0.0);
    REQUIRE(sd.obstructions.size() == 1);
    CHECK(sd.obstructions[0] == 2);
    CHECK(sd.tail_bound == 0.0);
}

TEST_CASE("empty system has unit singular series") {
    PolySystem s(2, {});
    SingularData sd = sigma_truncated(s, 50, 4);
    CHECK(sd.sigma_truncated == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sd.tail_bound == doctest::Approx(0.0));
}

TEST_CASE("non-stabilizing factor names the prime") {
    Polynomial sq(2);
    sq.add_term({2, 0}, 1);
    sq.add_term({1, 1}, -2);
    sq.add_term({0, 2}, 1);
    PolySystem s(2, {{2, sq}});
    try {
        sigma_truncated(s, 10, 2);
        CHECK(false);
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("p = 2") != std::string::npos);
    }
}

// ----------------------------------------------------------------------------

TEST_CASE("nonsingular unit witness for the odd ternary target") {
    CHECK(hensel_unit_check(ternary(9), 5) == HenselVerdict::yes);
    CHECK(hensel_unit_check(ternary(11), 3) == HenselVerdict::yes);
    CHECK(hensel_unit_check(binary(10), 2) == HenselVerdict::yes);
}

TEST_CASE("parity obstruction is a definite no") {
    CHECK(hensel_unit_check(ternary(10), 2) == HenselVerdict::no);
}

TEST_CASE("unit-square form leaves no unit candidates") {
    // x1^2 - 5 x2 mod 5 forces x1 = 0, which is no unit: nu_1 = 0, so the
    // local density vanishes and the verdict is a definite no
    Polynomial f(2);
    f.add_term({2, 0}, 1);
    f.add_term({0, 1}, -5);
    PolySystem s(2, {{2, f}});
    CHECK(hensel_unit_check(s, 5) == HenselVerdict::no);
    LocalProfile prof = mu_p(s, 5, 3);
    CHECK(prof.obstruction);
    CHECK(prof.mu_p == 0.0);
}

TEST_CASE("singular candidates only: undecided") {
    Polynomial sq(2);
    sq.add_term({2, 0}, 1);
    sq.add_term({1, 1}, -2);
    sq.add_term({0, 2}, 1);
    PolySystem s(2, {{2, sq}});  // (x1 - x2)^2, every unit zero is singular
    CHECK(hensel_unit_check(s, 5) == HenselVerdict::unknown);
}

TEST_CASE("a yes verdict forces a positive density") {
    std::mt19937 rng(205);
    int yeses = 0;
    for (int trial = 0; trial < 30 && yeses < 10; ++trial) {
        PolySystem s = random_system(rng, 2, 1);
        for (std::int64_t p : {5, 7}) {
            if (hensel_unit_check(s, p) != HenselVerdict::yes) continue;
            LocalProfile prof = mu_p(s, p, 3);
            CHECK(prof.mu_p > 0.0);
            CHECK_FALSE(prof.obstruction);
            ++yeses;
        }
    }
    CHECK(yeses >= 10);
}

TEST_CASE("verdict names") {
    CHECK(std::string(to_string(HenselVerdict::yes)) == "yes");
    CHECK(std::string(to_string(HenselVerdict::no)) == "no");
    CHECK(std::string(to_string(HenselVerdict::unknown)) == "unknown");
}

TEST_SUITE_END();
