#include <qinterp/finite_field.hpp>

#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

using namespace qinterp;

TEST_SUITE_BEGIN("finite_field");

TEST_CASE("element construction validates the modulus") {
    CHECK_THROWS_WITH_AS(FieldElem(1, 6), doctest::Contains("prime"), std::invalid_argument);
    CHECK_THROWS_AS(FieldElem(0, 1), std::invalid_argument);
    CHECK(FieldElem(7, 5).value() == 2); // reduced at construction
}

TEST_CASE("field axioms hold exhaustively for small primes") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        for (std::uint32_t a = 0; a < p; ++a) {
            for (std::uint32_t b = 0; b < p; ++b) {
                const FieldElem ea(a, p), eb(b, p);
                CHECK(ea + eb == eb + ea);
                CHECK(ea * eb == eb * ea);
                for (std::uint32_t c = 0; c < p; ++c) {
                    const FieldElem ec(c, p);
                    CHECK((ea + eb) + ec == ea + (eb + ec));
                    CHECK((ea * eb) * ec == ea * (eb * ec));
                    CHECK(ea * (eb + ec) == ea * eb + ea * ec);
                }
                if (a != 0) CHECK(ea * ea.inverse() == FieldElem(1, p));
            }
        }
    }
}

TEST_CASE("arithmetic rejects mixed moduli") {
    CHECK_THROWS_AS(FieldElem(1, 5) + FieldElem(1, 7), std::invalid_argument);
    CHECK_THROWS_AS(evaluate(FieldPoly({1, 2}, 5), FieldElem(1, 7)), std::invalid_argument);
}

TEST_CASE("evaluate") {
    CHECK(evaluate(FieldPoly(5), FieldElem(3, 5)) == FieldElem(0, 5));      // zero polynomial
    CHECK(evaluate(FieldPoly({0, 1}, 7), FieldElem(4, 7)) == FieldElem(4, 7)); // identity
    // 2x^2 + 3x + 1 at x=2 over GF(5): 8 + 6 + 1 = 15 = 0
    const FieldPoly f({1, 3, 2}, 5);
    CHECK(evaluate(f, FieldElem(2, 5)) == FieldElem(0, 5));
}

TEST_CASE("lagrange interpolation") {
    SUBCASE("single point gives the constant") {
        const auto c = lagrange_interpolate({{FieldElem(0, 5), FieldElem(3, 5)}}, 5);
        CHECK(c.degree() == 0);
        CHECK(c.coefficient(0) == FieldElem(3, 5));
    }
    SUBCASE("three points over GF(5)") {
        const auto f = lagrange_interpolate(
            {{FieldElem(0, 5), FieldElem(1, 5)},
             {FieldElem(1, 5), FieldElem(1, 5)},
             {FieldElem(2, 5), FieldElem(0, 5)}},
            5);
        const FieldPoly expected({1, 3, 2}, 5);
        CHECK(f == expected);
        for (std::uint32_t x : {0u, 1u, 2u}) {
            CHECK(evaluate(f, FieldElem(x, 5)) == evaluate(expected, FieldElem(x, 5)));
        }
    }
    SUBCASE("duplicate x is rejected, naming the point") {
        CHECK_THROWS_WITH_AS(
            lagrange_interpolate(
                {{FieldElem(2, 5), FieldElem(1, 5)}, {FieldElem(2, 5), FieldElem(3, 5)}}, 5),
            doctest::Contains("2"), std::invalid_argument);
    }
}

TEST_CASE("round trip: interpolating any d+1 samples returns the polynomial") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
        for (std::uint32_t d = 0; d <= std::min(3u, p - 1); ++d) {
            const auto domain = all_residues(p);
            const Family family = enumerate_family(p, d, domain);
            // all (d+1)-subsets of the domain
            std::vector<std::uint32_t> combo(d + 1);
            for (std::uint32_t i = 0; i <= d; ++i) combo[i] = i;
            bool more = true;
            while (more) {
                for (std::size_t m = 0; m < family.size(); ++m) {
                    std::vector<std::pair<FieldElem, FieldElem>> pts;
                    for (const auto i : combo) {
                        pts.emplace_back(domain[i], family.member(m).values()[i]);
                    }
                    CHECK(lagrange_interpolate(pts, p) == family.member_poly(m));
                }
                more = false;
                for (std::size_t i = combo.size(); i-- > 0;) {
                    if (combo[i] < p - (combo.size() - i)) {
                        ++combo[i];
                        for (std::size_t j = i + 1; j < combo.size(); ++j) {
                            combo[j] = combo[j - 1] + 1;
                        }
                        more = true;
                        break;
                    }
                }
            }
        }
    }
}

TEST_CASE("enumerate_family") {
    SUBCASE("smallest family") {
        const auto fam = enumerate_family(2, 0, all_residues(2));
        REQUIRE(fam.size() == 2);
        CHECK(fam.member(0).values()[0] == FieldElem(0, 2));
        CHECK(fam.member(1).values()[0] == FieldElem(1, 2));
    }
    SUBCASE("count is p^(d+1)") {
        const auto fam = enumerate_family(3, 1, {FieldElem(1, 3), FieldElem(2, 3)});
        CHECK(fam.size() == 9);
    }
    SUBCASE("tables agree with evaluate and are pairwise distinct when |D| >= d+1") {
        const std::vector<FieldElem> domain{FieldElem(1, 5), FieldElem(2, 5), FieldElem(3, 5),
                                            FieldElem(4, 5)};
        const auto fam = enumerate_family(5, 2, domain);
        REQUIRE(fam.size() == 125);
        std::set<std::vector<std::uint32_t>> seen;
        for (std::size_t m = 0; m < fam.size(); ++m) {
            std::vector<std::uint32_t> vals;
            for (std::size_t i = 0; i < domain.size(); ++i) {
                const auto v = evaluate(fam.member_poly(m), domain[i]);
                CHECK(v == fam.member(m).values()[i]);
                vals.push_back(v.value());
            }
            CHECK(seen.insert(vals).second);
        }
    }
    SUBCASE("lexicographic coefficient order") {
        const auto fam = enumerate_family(3, 1, {FieldElem(0, 3)});
        // (c0, c1): (0,0), (0,1), (0,2), (1,0), ...
        CHECK(fam.member_poly(0).is_zero());
        CHECK(fam.member_poly(1) == FieldPoly({0, 1}, 3));
        CHECK(fam.member_poly(2) == FieldPoly({0, 2}, 3));
        CHECK(fam.member_poly(3) == FieldPoly({1}, 3));
    }
    SUBCASE("cap exceeded reports the required count") {
        try {
            enumerate_family(5, 2, all_residues(5), 100);
            FAIL("expected BudgetError");
        } catch (const BudgetError& e) {
            CHECK(e.required() == 125);
            CHECK(e.budget() == 100);
        }
    }
}

TEST_SUITE_END();
