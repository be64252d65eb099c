#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include <json.hpp>

#include "hlprime/normalize.hpp"

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

// all integer zeros of s inside [-B, B]^n, as sorted tuples
std::set<std::vector<std::int64_t>> box_solutions(const PolySystem& s, std::int64_t B) {
    std::set<std::vector<std::int64_t>> out;
    const int n = s.n();
    std::vector<std::int64_t> x(static_cast<std::size_t>(n), -B);
    for (;;) {
        bool zero = true;
        for (const auto& [ell, p] : s.entries())
            if (p.evaluate_int(x) != 0) {
                zero = false;
                break;
            }
        if (zero) out.insert(x);
        int i = 0;
        while (i < n && x[static_cast<std::size_t>(i)] == B) {
            x[static_cast<std::size_t>(i)] = -B;
            ++i;
        }
        if (i == n) break;
        ++x[static_cast<std::size_t>(i)];
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("normalize");

TEST_CASE("linear elimination with the default variable priority") {
    // {x1 + x2 - 4, x1^2 + x2^2 - 8}: pivot x1, substitute x1 = 4 - x2
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({0, 2}, 1);
    q.add_term({0, 0}, -8);
    PolySystem s(2, {{1, lin(2, {1, 1}, -4)}, {2, q}});

    EliminateResult el = eliminate_linear(s);
    REQUIRE(el.partial.substitutions.size() == 1);
    const LinearElimination& le = el.partial.substitutions[0];
    CHECK(le.pivot_var == 0);
    CHECK(le.c == 1);
    CHECK(le.ftilde == lin(2, {0, 1}, -4));

    REQUIRE(el.higher.entries().size() == 1);
    // substituted quadratic 2 x2^2 - 8 x2 + 8, then content removed
    Polynomial expect(2);
    expect.add_term({0, 2}, 1);
    expect.add_term({0, 1}, -4);
    expect.add_term({0, 0}, 4);
    CHECK(el.higher.entries()[0].second == expect);
}

TEST_CASE("linear elimination honors a reversed priority") {
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({0, 2}, 1);
    q.add_term({0, 0}, -8);
    PolySystem s(2, {{1, lin(2, {1, 1}, -4)}, {2, q}});

    EliminateResult el = eliminate_linear(s, MonomialOrder::reversed(2));
    REQUIRE(el.partial.substitutions.size() == 1);
    CHECK(el.partial.substitutions[0].pivot_var == 1);
    CHECK(el.partial.substitutions[0].ftilde == lin(2, {1, 0}, -4));

    Polynomial expect(2);
    expect.add_term({2, 0}, 1);
    expect.add_term({1, 0}, -4);
    expect.add_term({0, 0}, 4);
    CHECK(el.higher.entries()[0].second == expect);
}

TEST_CASE("linear elimination scales away even content") {
    PolySystem s(2, {{1, lin(2, {2, -2})}});
    EliminateResult el = eliminate_linear(s);
    REQUIRE(el.partial.entries.size() == 1);
    CHECK(el.partial.entries[0].c == 1);
    CHECK(el.partial.entries[0].leading == Exponents{1, 0});
    CHECK(el.partial.entries[0].tail == lin(2, {0, -1}));
    CHECK(el.higher.entries().empty());
}

TEST_CASE("no linear forms: elimination is the identity") {
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({0, 2}, 1);
    q.add_term({0, 0}, -2);
    PolySystem s(2, {{2, q}});
    EliminateResult el = eliminate_linear(s);
    CHECK(el.partial.entries.empty());
    CHECK(el.partial.substitutions.empty());
    CHECK(serialize_system(el.higher) == serialize_system(s));
}

TEST_CASE("dependent linear forms are rejected") {
    PolySystem a(2, {{1, lin(2, {1, 1})}, {1, lin(2, {1, 1}, -1)}});
    CHECK_THROWS_AS(eliminate_linear(a), validation_error);
    PolySystem b(2, {{1, lin(2, {1, 1})}, {1, lin(2, {2, 2})}});
    CHECK_THROWS_AS(eliminate_linear(b), validation_error);
}

TEST_CASE("degree collapse under substitution is a full-rank violation") {
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({0, 2}, -1);
    PolySystem s(2, {{1, lin(2, {1, -1})}, {2, q}});  // x1 = x2 kills x1^2 - x2^2
    bool threw = false;
    try {
        eliminate_linear(s);
    } catch (const validation_error& ex) {
        threw = true;
        CHECK(std::string(ex.what()).find("full-rank violation at degree 2") != std::string::npos);
    }
    CHECK(threw);
}

// ----------------------------------------------------------------------------

TEST_CASE("single quadratic reduces to leading plus tail") {
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({0, 2}, 1);
    q.add_term({0, 0}, -2);
    PolySystem s(2, {{2, q}});
    NormalForm nf = reduce_to_normal_form(s);
    REQUIRE(nf.entries.size() == 1);
    const NormalFormEntry& e = nf.entries[0];
    CHECK(e.degree == 2);
    CHECK(e.leading == Exponents{2, 0});
    CHECK(e.c == 1);
    CHECK(e.chi.is_zero());
    Polynomial tail(2);
    tail.add_term({0, 2}, 1);
    tail.add_term({0, 0}, -2);
    CHECK(e.tail == tail);
    CHECK(nf.w_vars == std::vector<int>{0});
    CHECK(verify_normal_form(nf).all_ok());
}

TEST_CASE("two quadratics get distinct leading monomials") {
    Polynomial f1(2), f2(2);
    f1.add_term({1, 1}, 1);
    f1.add_term({0, 0}, -1);
    f2.add_term({2, 0}, 1);
    f2.add_term({0, 1}, 1);
    f2.add_term({0, 0}, -3);
    PolySystem s(2, {{2, f1}, {2, f2}});
    NormalForm nf = reduce_to_normal_form(s);
    REQUIRE(nf.entries.size() == 2);
    CHECK(nf.entries[0].leading == Exponents{2, 0});
    CHECK(nf.entries[1].leading == Exponents{1, 1});
    CHECK(verify_normal_form(nf).all_ok());
    // the solution set is untouched
    CHECK(box_solutions(nf.system(), 6) == box_solutions(s, 6));
}

TEST_CASE("cross-degree reduction produces a nonzero chi") {
    // x1^3 is divisible by the degree-2 leading x1^2 and reduces to x1 x2
    Polynomial f2(2), f3(2);
    f2.add_term({2, 0}, 1);
    f2.add_term({0, 1}, -1);
    f3.add_term({3, 0}, 1);
    f3.add_term({0, 3}, 1);
    PolySystem s(2, {{2, f2}, {3, f3}});
    NormalForm nf = reduce_to_normal_form(s);
    REQUIRE(nf.entries.size() == 2);
    const NormalFormEntry& e3 = nf.entries[1];
    CHECK(e3.degree == 3);
    CHECK(e3.leading == Exponents{0, 3});
    Polynomial chi(2);
    chi.add_term({1, 1}, 1);
    CHECK(e3.chi == chi);
    CHECK(e3.tail.is_zero());
    VerifyReport rep = verify_normal_form(nf);
    CHECK(rep.all_ok());
    REQUIRE(rep.chi_h_bounds.size() == 1);
    CHECK(rep.chi_h_bounds[0].first == 3);
    CHECK(rep.chi_h_bounds[0].second == 1);  // x1 x2 is a single product
    CHECK(box_solutions(nf.system(), 6) == box_solutions(s, 6));
}

TEST_CASE("renormalizing a normal form only canonicalizes chi to zero") {
    Polynomial f2(2), f3(2);
    f2.add_term({2, 0}, 1);
    f2.add_term({0, 1}, -1);
    f3.add_term({3, 0}, 1);
    f3.add_term({0, 3}, 1);
    PolySystem s(2, {{2, f2}, {3, f3}});
    NormalForm nf = reduce_to_normal_form(s);
    NormalForm nf2 = reduce_to_normal_form(nf.system());
    REQUIRE(nf2.entries.size() == nf.entries.size());
    for (std::size_t i = 0; i < nf.entries.size(); ++i) {
        CHECK(nf2.entries[i].degree == nf.entries[i].degree);
        CHECK(nf2.entries[i].leading == nf.entries[i].leading);
        CHECK(nf2.entries[i].c == nf.entries[i].c);
        CHECK(nf2.entries[i].chi.is_zero());
        CHECK(nf2.entries[i].chi + nf2.entries[i].tail ==
              nf.entries[i].chi + nf.entries[i].tail);
    }
}

TEST_CASE("mixed linear and quadratic system round trip") {
    Polynomial q(3);
    q.add_term({2, 0, 0}, 1);
    q.add_term({0, 2, 0}, 1);
    q.add_term({0, 0, 2}, 1);
    q.add_term({0, 0, 0}, -9);
    PolySystem s(3, {{1, lin(3, {1, 1, 1}, -5)}, {2, q}});
    NormalForm nf = reduce_to_normal_form(s);
    CHECK(verify_normal_form(nf).all_ok());
    // pivot variable substituted out of the quadratic
    for (const auto& e : nf.entries)
        if (e.degree == 2) {
            CHECK_FALSE(e.tail.uses_variable(0));
            CHECK(e.leading[0] == 0);
        }
    CHECK(box_solutions(nf.system(), 6) == box_solutions(s, 6));
}

TEST_CASE("random systems preserve their integer solution sets") {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> cd(-3, 3);
    int done = 0, attempts = 0;
    while (done < 50 && attempts < 400) {
        ++attempts;
        int n = 2 + static_cast<int>(rng() % 2);
        int r1 = static_cast<int>(rng() % 2);
        int r2 = 1 + static_cast<int>(rng() % 2);
        std::vector<std::pair<int, Polynomial>> polys;
        bool ok = true;
        for (int i = 0; i < r1; ++i) {
            std::vector<int> c(static_cast<std::size_t>(n));
            bool nz = false;
            for (auto& x : c) {
                x = cd(rng);
                nz |= (x != 0);
            }
            if (!nz) ok = false;
            polys.emplace_back(1, lin(n, c, cd(rng)));
        }
        for (int i = 0; ok && i < r2; ++i) {
            Polynomial p(n);
            bool top = false;
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b) {
                    Exponents e(static_cast<std::size_t>(n), 0);
                    ++e[static_cast<std::size_t>(a)];
                    ++e[static_cast<std::size_t>(b)];
                    int c = cd(rng);
                    if (c != 0) top = true;
                    p.add_term(e, c);
                }
            for (int a = 0; a < n; ++a) {
                Exponents e(static_cast<std::size_t>(n), 0);
                e[static_cast<std::size_t>(a)] = 1;
                p.add_term(e, cd(rng));
            }
            p.add_term(Exponents(static_cast<std::size_t>(n), 0), cd(rng));
            if (!top) ok = false;
            if (ok) polys.emplace_back(2, p);
        }
        if (!ok) continue;
        PolySystem s(n, std::move(polys));
        NormalForm nf;
        try {
            nf = reduce_to_normal_form(s);
        } catch (const validation_error&) {
            continue;  // degenerate draw (dependent forms, degree collapse)
        }
        CHECK(verify_normal_form(nf).all_ok());
        CHECK(box_solutions(nf.system(), 6) == box_solutions(s, 6));
        ++done;
    }
    CHECK(done == 50);
}

TEST_CASE("verification flags injected corruption") {
    Polynomial f2(2), f3(2);
    f2.add_term({2, 0}, 1);
    f2.add_term({0, 1}, -1);
    f3.add_term({3, 0}, 1);
    f3.add_term({0, 3}, 1);
    PolySystem s(2, {{2, f2}, {3, f3}});
    NormalForm good = reduce_to_normal_form(s);
    REQUIRE(verify_normal_form(good).all_ok());

    NormalForm bad = good;
    bad.entries[1].chi.add_term({2, 0}, 1);  // divisible by the degree-2 leading
    VerifyReport rep = verify_normal_form(bad);
    CHECK_FALSE(rep.chi_clean.ok);
    REQUIRE(!rep.chi_clean.witnesses.empty());
    CHECK(rep.chi_clean.witnesses[0].find("x1^2") != std::string::npos);
    CHECK_FALSE(rep.all_ok());

    NormalForm bad2 = good;
    bad2.entries[1].tail.add_term({2, 1}, 5);  // divisible and not below leading
    VerifyReport rep2 = verify_normal_form(bad2);
    CHECK_FALSE(rep2.tail_clean.ok);

    NormalForm bad3 = good;
    bad3.entries[1].leading = bad3.entries[0].leading;
    bad3.entries[1].degree = 2;
    CHECK_FALSE(verify_normal_form(bad3).distinctness.ok);

    NormalForm bad4 = good;
    bad4.entries[0].c = 0;
    CHECK_FALSE(verify_normal_form(bad4).shape.ok);
}

TEST_CASE("empty systems verify vacuously") {
    PolySystem s(2, {});
    NormalForm nf = reduce_to_normal_form(s);
    CHECK(nf.entries.empty());
    CHECK(verify_normal_form(nf).all_ok());
}

TEST_CASE("normal form serialization carries w_vars and substitutions") {
    Polynomial q(2);
    q.add_term({2, 0}, 1);
    q.add_term({0, 2}, 1);
    q.add_term({0, 0}, -8);
    PolySystem s(2, {{1, lin(2, {1, 1}, -4)}, {2, q}});
    NormalForm nf = reduce_to_normal_form(s);
    nlohmann::json j = nlohmann::json::parse(serialize_normal_form(nf));
    CHECK(j["n"] == 2);
    CHECK(j.contains("w_vars"));
    CHECK(j.contains("substitutions"));
    REQUIRE(j["substitutions"].size() == 1);
    CHECK(j["substitutions"][0]["pivot_var"] == 0);
    CHECK(j["entries"].size() == 2);
}

TEST_SUITE_END();
