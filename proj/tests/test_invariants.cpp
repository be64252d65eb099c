#include <doctest.h>

#include <cmath>
#include <random>

#include "hlprime/invariants.hpp"

using namespace hlprime;

namespace {

Polynomial lin(int n, const std::vector<int>& c, int c0 = 0) {
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

// sum of squares of the first k variables
Polynomial squares(int n, int k) {
    Polynomial p(n);
    for (int i = 0; i < k; ++i) {
        Exponents e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 2;
        p.add_term(e, 1);
    }
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("invariants");

TEST_CASE("rho evaluates Schmidt's function") {
    CHECK(rho(2, 2, 1) == 1024);
    CHECK(rho(3, 2, 2) == 6144);
    CHECK(rho(2, 2, 0) == 0);
    CHECK(rho(5, 3, 0) == 0);
    CHECK(rho(3, 3, 1) == 3 * 4096 * 6);
}

TEST_CASE("rho is strictly increasing in t") {
    for (int d = 2; d <= 4; ++d)
        for (int ell = 2; ell <= d; ++ell)
            for (std::int64_t t = 1; t <= 5; ++t) CHECK(rho(d, ell, t) < rho(d, ell, t + 1));
}

TEST_CASE("rho rejects out-of-range degrees") {
    CHECK_THROWS_AS(rho(2, 1, 1), validation_error);
    CHECK_THROWS_AS(rho(2, 3, 1), validation_error);
    CHECK_THROWS_AS(rho(2, 2, -1), validation_error);
}

// ----------------------------------------------------------------------------

TEST_CASE("linear rank: minimum support of a nontrivial combination") {
    PolySystem s(3, {{1, lin(3, {1, 1, 0})}, {1, lin(3, {0, 1, 1})}});
    RankEstimate est = birch_rank_estimate(s, 1);
    CHECK(est.value == 2.0);
    CHECK(est.method == "exact-linear");
    CHECK(est.confidence == "exact");
    CHECK_FALSE(est.infinite);

    // constants do not matter
    PolySystem t(3, {{1, lin(3, {1, 1, 0}, -5)}, {1, lin(3, {0, 1, 1}, 2)}});
    CHECK(birch_rank_estimate(t, 1).value == 2.0);

    // ternary linear form touches all three variables
    PolySystem u(3, {{1, lin(3, {1, 1, 1}, -9)}});
    CHECK(birch_rank_estimate(u, 1).value == 3.0);

    // dependent forms admit the zero combination
    PolySystem w(2, {{1, lin(2, {1, 1})}, {1, lin(2, {2, 2}, -3)}});
    CHECK(birch_rank_estimate(w, 1).value == 0.0);
}

TEST_CASE("empty group has infinite rank") {
    PolySystem s(2, {{1, lin(2, {1, -1})}});
    RankEstimate est = birch_rank_estimate(s, 2);
    CHECK(est.infinite);
    CHECK(est.method == "empty-group");
}

TEST_CASE("single diagonal form is handled exactly") {
    PolySystem s(3, {{2, squares(3, 3)}});
    RankEstimate est = birch_rank_estimate(s, 2);
    CHECK(est.value == 3.0);
    CHECK(est.method == "diagonal-exact");
    CHECK(est.confidence == "exact");

    // only one variable participating: singular locus is a hyperplane
    PolySystem t(2, {{2, squares(2, 1)}});
    CHECK(birch_rank_estimate(t, 2).value == 1.0);
}

TEST_CASE("point counts see a nonsingular conic") {
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({1, 1}, 1);
    q.add_term({0, 2}, 1);
    PolySystem s(2, {{2, q}});
    RankEstimate est = birch_rank_estimate(s, 2);
    CHECK(est.method == "pointcount-fit");
    CHECK(est.confidence == "heuristic");
    CHECK(est.value == 2.0);
    REQUIRE(est.probe_counts.size() == 3);
    for (const auto& [p, cnt] : est.probe_counts) CHECK(cnt == 1);  // origin only
}

TEST_CASE("point counts see a degenerate square") {
    // (x1+x2)^2: the singular locus is the line x1+x2 = 0
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({1, 1}, 2);
    q.add_term({0, 2}, 1);
    PolySystem s(2, {{2, q}});
    RankEstimate est = birch_rank_estimate(s, 2);
    CHECK(est.value == 1.0);
    for (const auto& [p, cnt] : est.probe_counts) CHECK(cnt == p);
}

TEST_CASE("point counts handle a rank-2 group") {
    // {x1^2, x2^2} in 3 variables: rank drops on x1 = 0 or x2 = 0
    Polynomial a(3), b(3);
    a.add_term({2, 0, 0}, 1);
    b.add_term({0, 2, 0}, 1);
    PolySystem g(3, {{2, a}, {2, b}});
    RankEstimate est = birch_rank_estimate(g, 2);
    CHECK(est.value == 1.0);
    for (const auto& [p, cnt] : est.probe_counts) CHECK(cnt == 2 * p * p - p);
}

TEST_CASE("rank estimates stay within [0, n]") {
    std::mt19937 rng(77);
    std::uniform_int_distribution<int> cd(-2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng() % 2);
        Polynomial q(n);
        bool top = false;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                Exponents e(static_cast<std::size_t>(n), 0);
                ++e[static_cast<std::size_t>(i)];
                ++e[static_cast<std::size_t>(j)];
                int c = cd(rng);
                if (c != 0) top = true;
                q.add_term(e, c);
            }
        if (!top) {
            Exponents e(static_cast<std::size_t>(n), 0);
            e[0] = 2;
            q.add_term(e, 1);
        }
        PolySystem s(n, {{2, q}});
        RankEstimate est = birch_rank_estimate(s, 2);
        CHECK(est.value >= 0.0);
        CHECK(est.value <= static_cast<double>(n));
    }
}

TEST_CASE("restriction to a coordinate hyperplane obeys the linear bounds") {
    // B_1(G) >= B_1(G restricted to x_j = 0) >= B_1(G) - 1
    std::mt19937 rng(555);
    std::uniform_int_distribution<int> cd(-3, 3);
    int tested = 0;
    while (tested < 25) {
        int n = 3 + static_cast<int>(rng() % 2);
        int r = 1 + static_cast<int>(rng() % 3);
        std::vector<std::vector<int>> rows;
        bool ok = true;
        for (int i = 0; i < r; ++i) {
            std::vector<int> c(static_cast<std::size_t>(n));
            bool nz = false;
            for (auto& x : c) {
                x = cd(rng);
                nz |= (x != 0);
            }
            if (!nz) ok = false;
            rows.push_back(c);
        }
        if (!ok) continue;
        std::vector<std::pair<int, Polynomial>> polys;
        for (const auto& c : rows) polys.emplace_back(1, lin(n, c));
        PolySystem s(n, std::move(polys));
        double b = birch_rank_estimate(s, 1).value;

        int j = static_cast<int>(rng() % static_cast<unsigned>(n));
        double br;
        bool killed = false;
        std::vector<std::pair<int, Polynomial>> rpolys;
        for (auto c : rows) {
            c[static_cast<std::size_t>(j)] = 0;
            bool nz = false;
            for (int x : c) nz |= (x != 0);
            if (!nz) {
                killed = true;
                break;
            }
            rpolys.emplace_back(1, lin(n, c));
        }
        if (killed) {
            br = 0.0;  // a form vanished: the zero combination is nontrivial
        } else {
            PolySystem rs(n, std::move(rpolys));
            br = birch_rank_estimate(rs, 1).value;
        }
        CHECK(b >= br);
        CHECK(br >= b - 1.0);
        ++tested;
    }
}

// ----------------------------------------------------------------------------

TEST_CASE("h upper bound from greedy grouping") {
    Polynomial a(3);
    a.add_term({1, 1, 0}, 1);
    a.add_term({1, 0, 1}, 1);
    CHECK(h_upper_bound(a) == 1);  // x1(x2 + x3)

    Polynomial b(4);
    b.add_term({1, 1, 0, 0}, 1);
    b.add_term({0, 0, 1, 1}, 1);
    CHECK(h_upper_bound(b) == 2);

    CHECK(h_upper_bound(squares(2, 2)) == 2);
    CHECK(h_upper_bound(Polynomial(3)) == 0);

    Polynomial mixed(2);
    mixed.add_term({2, 0}, 1);
    mixed.add_term({0, 1}, 1);
    CHECK_THROWS_AS(h_upper_bound(mixed), validation_error);
}

TEST_CASE("h upper bound is at most the variable count and at least 2^{1-l} B") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<int> cd(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(rng() % 3);
        int k = 1 + static_cast<int>(rng() % n);
        int ell = 2 + static_cast<int>(rng() % 2);
        Polynomial p(n);
        for (int i = 0; i < k; ++i) {
            Exponents e(static_cast<std::size_t>(n), 0);
            e[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(ell);
            p.add_term(e, cd(rng));
        }
        int h = h_upper_bound(p);
        CHECK(h == k);  // diagonal: one group per variable
        PolySystem s(n, {{ell, p}});
        RankEstimate est = birch_rank_estimate(s, ell);
        REQUIRE(est.confidence == "exact");
        CHECK(static_cast<double>(h) >= std::ldexp(est.value, 1 - ell));
    }
}

// ----------------------------------------------------------------------------

TEST_CASE("regularity verdict: large diagonal quadratic satisfies the threshold") {
    const int n = 2500;
    PolySystem s(n, {{2, squares(n, n)}});
    RegularityVerdict v = regularity_verdict(s);
    CHECK(v.satisfied);
    REQUIRE(v.degrees.size() == 1);
    CHECK(v.degrees[0].ell == 2);
    CHECK(v.degrees[0].threshold == 1024);  // 2 * 2^8 * 2! * 1 * 1
    CHECK(v.degrees[0].achieved_lower_bound == doctest::Approx(1250.0));
    CHECK(v.degrees[0].ok);
}

TEST_CASE("regularity verdict: small systems are not verifiable") {
    PolySystem s(3, {{2, squares(3, 3)}});
    RegularityVerdict v = regularity_verdict(s);
    CHECK_FALSE(v.satisfied);
    CHECK(v.detail == "not verifiable at these thresholds");
    REQUIRE(v.degrees.size() == 1);
    CHECK(v.degrees[0].achieved_lower_bound == doctest::Approx(1.5));
    CHECK(v.degrees[0].threshold == 1024);

    // the same shape at n=200 also falls short: 2^{1-2} * 200 = 100 < 1024
    PolySystem t(200, {{2, squares(200, 200)}});
    RegularityVerdict vt = regularity_verdict(t);
    CHECK_FALSE(vt.satisfied);
    CHECK(vt.degrees[0].achieved_lower_bound == doctest::Approx(100.0));
}

TEST_CASE("regularity verdict: dependent linear forms are flagged") {
    PolySystem s(2, {{1, lin(2, {1, 1})}, {1, lin(2, {2, 2}, -3)}});
    RegularityVerdict v = regularity_verdict(s);
    CHECK_FALSE(v.satisfied);
    REQUIRE(!v.degrees.empty());
    CHECK(v.degrees[0].ell == 1);
    CHECK_FALSE(v.degrees[0].ok);
}

TEST_CASE("regularity verdict: pure linear systems reduce to independence") {
    PolySystem s(3, {{1, lin(3, {1, 1, 1}, -9)}});
    RegularityVerdict v = regularity_verdict(s);
    CHECK(v.satisfied);
    REQUIRE(v.degrees.size() == 1);
    CHECK(v.degrees[0].ell == 1);
    CHECK(v.degrees[0].ok);
}

TEST_CASE("regularity verdict: corollary threshold with linear forms present") {
    std::vector<std::pair<int, Polynomial>> polys;
    polys.emplace_back(1, lin(5, {1, 1, 1, 1, 1}));
    polys.emplace_back(2, squares(5, 5));
    PolySystem s(5, std::move(polys));
    RegularityVerdict v = regularity_verdict(s);
    REQUIRE(v.degrees.size() == 2);
    CHECK(v.degrees[0].ell == 1);
    CHECK(v.degrees[0].ok);
    CHECK(v.degrees[1].ell == 2);
    // rho(2, 2, R - r1) + r1 = rho(2,2,1) + 1
    CHECK(v.degrees[1].threshold == 1025);
    CHECK(v.degrees[1].achieved_lower_bound == doctest::Approx(2.5));
    CHECK_FALSE(v.satisfied);
}

// ----------------------------------------------------------------------------

TEST_CASE("empirical regularity: affine plane") {
    PolySystem s(3, {{1, lin(3, {1, 1, -1})}});
    EmpiricalRegularity er = empirical_regularity(s, {20, 40, 80});
    CHECK_FALSE(er.degenerate);
    CHECK(er.expected == 2.0);
    CHECK(er.slope == doctest::Approx(2.0).epsilon(0.0375));  // within 0.15 absolute
    // exact counts: (2X+1)^2 - X(X+1)
    REQUIRE(er.counts.size() == 3);
    CHECK(er.counts[0] == 41 * 41 - 20 * 21);
    CHECK(er.counts[2] == 161 * 161 - 80 * 81);
}

TEST_CASE("empirical regularity: isolated zero gives flat growth") {
    PolySystem s(2, {{2, squares(2, 2)}});
    EmpiricalRegularity er = empirical_regularity(s, {10, 20, 40});
    CHECK_FALSE(er.degenerate);
    CHECK(er.expected == 0.0);
    CHECK(er.slope == doctest::Approx(0.0));
    for (auto c : er.counts) CHECK(c == 1);
}

TEST_CASE("empirical regularity: empty variety is degenerate") {
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({0, 2}, 1);
    q.add_term({0, 0}, 1);
    PolySystem s(2, {{2, q}});
    EmpiricalRegularity er = empirical_regularity(s, {5, 10, 20});
    CHECK(er.degenerate);
    for (auto c : er.counts) CHECK(c == 0);
}

TEST_CASE("empirical regularity needs two box sizes") {
    PolySystem s(2, {{1, lin(2, {1, -1})}});
    CHECK_THROWS_AS(empirical_regularity(s, {10}), validation_error);
}

TEST_SUITE_END();
