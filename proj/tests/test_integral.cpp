#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "hlprime/integral.hpp"

using namespace hlprime;

namespace {

constexpr double kPi = 3.14159265358979323846;

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

// scaled ternary target: v1 + v2 + v3 - 1 on the unit cube
PolySystem ternary_scaled() { return PolySystem(3, {{1, lin(3, {1, 1, 1}, -1)}}); }
PolySystem binary_scaled() { return PolySystem(2, {{1, lin(2, {1, 1}, -1)}}); }

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(kPi * t) / (kPi * t); }

std::complex<double> e_of(double x) {
    return {std::cos(2.0 * kPi * x), std::sin(2.0 * kPi * x)};
}

}  // namespace

TEST_SUITE_BEGIN("integral");

TEST_CASE("zero frequency integrates the constant one") {
    OscEstimate est = oscillatory_I(ternary_scaled(), {0.0});
    CHECK(est.value.real() == 1.0);
    CHECK(est.value.imag() == 0.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("one-dimensional identity form has the closed antiderivative") {
    PolySystem s(1, {{1, lin(1, {1})}});
    OscEstimate est = oscillatory_I(s, {0.5});
    // |(e(tau) - 1) / (2 pi i tau)| at tau = 1/2 is 2/pi
    CHECK(std::abs(std::abs(est.value) - 2.0 / kPi) < 3.0 * est.std_error + 1e-3);
}

TEST_CASE("ternary oscillatory values match the product of sincs") {
    // int e(tau (v1+v2+v3-1)) dv = e(tau/2) sinc(tau)^3
    PolySystem s = ternary_scaled();
    for (double tau : {0.3, 1.7, 2.3, -0.9}) {
        OscEstimate est = oscillatory_I(s, {tau});
        std::complex<double> exact = e_of(tau / 2.0) * std::pow(sinc(tau), 3);
        CHECK(std::abs(est.value - exact) < 3.0 * est.std_error + 2e-3);
    }
}

TEST_CASE("high frequencies decay") {
    PolySystem s = ternary_scaled();
    double lo = std::abs(oscillatory_I(s, {0.3}).value);
    double hi = std::abs(oscillatory_I(s, {10.3}).value);
    CHECK(hi < lo);
    // trivial bound holds at every tested frequency
    for (double tau : {0.1, 3.7, 12.9}) {
        OscEstimate est = oscillatory_I(s, {tau});
        CHECK(std::abs(est.value) <= 1.0 + 3.0 * est.std_error);
    }
}

TEST_CASE("fixed seeds reproduce bitwise") {
    PolySystem s = ternary_scaled();
    OscEstimate a = oscillatory_I(s, {1.3}, 1 << 14, 42);
    OscEstimate b = oscillatory_I(s, {1.3}, 1 << 14, 42);
    CHECK(a.value.real() == b.value.real());
    CHECK(a.value.imag() == b.value.imag());
    CHECK(a.std_error == b.std_error);
}

TEST_CASE("oscillatory validation") {
    PolySystem s = ternary_scaled();
    CHECK_THROWS_AS(oscillatory_I(s, {0.1, 0.2}), validation_error);
    PolySystem wide(5, {{1, lin(5, {1, 1, 1, 1, 1})}});
    CHECK_THROWS_AS(oscillatory_I(wide, {0.1}), validation_error);
    CHECK_THROWS_AS(oscillatory_I(s, {0.1}, 400000000), budget_error);
}

// ----------------------------------------------------------------------------

TEST_CASE("truncated integral at zero cutoff") {
    JEstimate j = j_of_l(ternary_scaled(), 0.0);
    CHECK(j.value == 0.0);
}

TEST_CASE("ternary truncated integral approaches one half") {
    JEstimate j = j_of_l(ternary_scaled(), 8.0);
    CHECK(std::abs(j.value - 0.5) < 0.02);
    CHECK(j.error >= 0.0);
    CHECK(j.error < 0.05);
}

TEST_CASE("binary truncated integral approaches one") {
    JEstimate j = j_of_l(binary_scaled(), 8.0);
    CHECK(std::abs(j.value - 1.0) < 0.04);
}

TEST_CASE("doubling the cutoff tightens the tail") {
    PolySystem s = ternary_scaled();
    JEstimate j2 = j_of_l(s, 2.0);
    JEstimate j4 = j_of_l(s, 4.0);
    JEstimate j8 = j_of_l(s, 8.0);
    // window increments consistent with a O(1/L) tail
    CHECK(std::abs(j4.value - j2.value) <= 0.1 / 2.0 + j2.error + j4.error);
    CHECK(std::abs(j8.value - j4.value) <= 0.1 / 4.0 + j4.error + j8.error);
}

TEST_CASE("two outer frequencies integrate over the square") {
    PolySystem s(2, {{1, lin(2, {1, -1})}, {1, lin(2, {1, 1}, -1)}});
    JEstimate j = j_of_l(s, 2.0);
    // nonsingular zero at (1/2, 1/2) with Jacobian determinant 2
    CHECK(std::abs(j.value - 0.5) < 0.2);
}

TEST_CASE("three outer frequencies are refused toward the shell route") {
    PolySystem s(3, {{1, lin(3, {1, 0, 0})},
                     {1, lin(3, {0, 1, 0})},
                     {1, lin(3, {0, 0, 1})}});
    try {
        j_of_l(s, 2.0);
        CHECK(false);
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("shell") != std::string::npos);
    }
    CHECK_THROWS_AS(j_of_l(ternary_scaled(), -1.0), validation_error);
    CHECK_THROWS_AS(j_of_l(ternary_scaled(), 9000.0), budget_error);
}

// ----------------------------------------------------------------------------

TEST_CASE("ternary shell density extrapolates to one half") {
    MuInftyEstimate est =
        shell_mu_infty(ternary_scaled(), {0.04, 0.02, 0.01}, 400000, 7);
    CHECK(std::abs(est.value - 0.5) <= 0.02);
    CHECK(est.method == "shell");
    CHECK_FALSE(est.zero_hit);
    CHECK(est.confidence_interval.first <= est.value);
    CHECK(est.confidence_interval.second >= est.value);
    CHECK(est.confidence_interval.second - est.confidence_interval.first < 0.08);
    CHECK(est.samples == 400000);
}

TEST_CASE("binary shell density extrapolates to one") {
    MuInftyEstimate est =
        shell_mu_infty(binary_scaled(), {0.04, 0.02, 0.01}, 400000, 7);
    CHECK(std::abs(est.value - 1.0) <= 0.02);
}

TEST_CASE("a form with no zeros in the cube reports the zero-hit flag") {
    PolySystem s(1, {{1, lin(1, {1}, -2)}});  // v1 - 2
    MuInftyEstimate est = shell_mu_infty(s, {0.04, 0.02, 0.01}, 100000, 3);
    CHECK(est.zero_hit);
    CHECK(est.value == 0.0);
    CHECK(est.confidence_interval.first == 0.0);
    CHECK(est.confidence_interval.second == 0.0);
}

TEST_CASE("schedule rescaling moves the estimate within its error bars") {
    PolySystem s = ternary_scaled();
    MuInftyEstimate a = shell_mu_infty(s, {0.04, 0.02, 0.01}, 400000, 11);
    MuInftyEstimate b = shell_mu_infty(s, {0.06, 0.03, 0.015}, 400000, 11);
    double ha = (a.confidence_interval.second - a.confidence_interval.first) / 2;
    double hb = (b.confidence_interval.second - b.confidence_interval.first) / 2;
    CHECK(std::abs(a.value - b.value) <= std::max(0.02, ha + hb));
}

TEST_CASE("an empty system fills the whole cube") {
    PolySystem s(2, {});
    MuInftyEstimate est = shell_mu_infty(s, {0.04, 0.02, 0.01}, 100000, 5);
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the two archimedean routes agree on the linear catalog") {
    for (PolySystem s : {ternary_scaled(), binary_scaled()}) {
        MuInftyEstimate shell = shell_mu_infty(s, {0.04, 0.02, 0.01}, 400000, 13);
        JEstimate j = j_of_l(s, 8.0);
        double hw = (shell.confidence_interval.second -
                     shell.confidence_interval.first) / 2;
        CHECK(std::abs(shell.value - j.value) <= std::max(0.05, hw + j.error));
    }
}

TEST_CASE("shell validation") {
    PolySystem s = ternary_scaled();
    CHECK_THROWS_AS(shell_mu_infty(s, {0.04, 0.02}, 100000, 1), validation_error);
    CHECK_THROWS_AS(shell_mu_infty(s, {0.01, 0.02, 0.04}, 100000, 1), validation_error);
    CHECK_THROWS_AS(shell_mu_infty(s, {0.04, 0.02, -0.01}, 100000, 1), validation_error);
    CHECK_THROWS_AS(shell_mu_infty(s, {0.04, 0.02, 0.01}, 50000, 1), validation_error);
    CHECK_THROWS_AS(shell_mu_infty(s, {0.04, 0.02, 0.01}, 2000000000, 1), budget_error);
}

TEST_CASE("oscillatory wrapper carries the cutoff") {
    MuInftyEstimate est = mu_infty_oscillatory(ternary_scaled(), 8.0);
    CHECK(est.method == "oscillatory");
    CHECK(est.L == 8.0);
    CHECK(est.confidence_interval.first <= est.value);
    CHECK(est.confidence_interval.second >= est.value);
    CHECK(std::abs(est.value - 0.5) < 0.02);
}

// ----------------------------------------------------------------------------

TEST_CASE("linear catalog admits nonsingular interior zeros") {
    CHECK(real_nonsingular_check(ternary_scaled()) == RealVerdict::yes);
    CHECK(real_nonsingular_check(binary_scaled()) == RealVerdict::yes);
}

TEST_CASE("sum of squares vanishes only at the closed corner") {
    Polynomial f(2);
    f.add_term({2, 0}, 1);
    f.add_term({0, 2}, 1);
    PolySystem s(2, {{2, f}});
    CHECK(real_nonsingular_check(s) == RealVerdict::unknown);
}

TEST_CASE("random soluble linear systems are certified") {
    std::mt19937 rng(301);
    std::uniform_int_distribution<int> cd(1, 3);
    for (int trial = 0; trial < 5; ++trial) {
        // force a zero at (1/2, 1/4): constant = -(a/2 + b/4)
        int a = cd(rng), b = cd(rng);
        Polynomial p(2);
        p.add_term({1, 0}, a);
        p.add_term({0, 1}, b);
        p.add_term({0, 0}, mpq_class(-(2 * a + b), 4));
        PolySystem s(2, {{1, p}});
        CHECK(real_nonsingular_check(s) == RealVerdict::yes);
    }
}

TEST_CASE("more forms than variables can never be certified") {
    PolySystem s(1, {{1, lin(1, {1})}, {2, [] {
                        Polynomial p(1);
                        p.add_term({2}, 1);
                        return p;
                    }()}});
    CHECK(real_nonsingular_check(s) == RealVerdict::unknown);
}

TEST_CASE("empty systems are vacuously nonsingular") {
    PolySystem s(3, {});
    CHECK(real_nonsingular_check(s) == RealVerdict::yes);
}

TEST_CASE("dimension limit") {
    PolySystem wide(5, {{1, lin(5, {1, 1, 1, 1, 1})}});
    CHECK_THROWS_AS(real_nonsingular_check(wide), validation_error);
}

TEST_CASE("verdict names") {
    CHECK(std::string(to_string(RealVerdict::yes)) == "yes");
    CHECK(std::string(to_string(RealVerdict::unknown)) == "unknown");
}

TEST_SUITE_END();
