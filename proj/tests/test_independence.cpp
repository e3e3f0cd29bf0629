#include <qinterp/independence.hpp>

#include <doctest.h>

#include <vector>

using namespace qinterp;

namespace {

// GF(3) lines on D = {1, 2}: the workhorse family of the small examples.
Family gf3_lines() { return enumerate_family(3, 1, {FieldElem(1, 3), FieldElem(2, 3)}); }

PropertySpec value_bit_at(std::uint32_t z, std::vector<std::uint32_t> accept, std::uint32_t p) {
    std::vector<FieldElem> a;
    for (const auto v : accept) a.emplace_back(v, p);
    return PropertySpec::value_bit(FieldElem(z, p), std::move(a));
}

} // namespace

TEST_SUITE_BEGIN("independence");

TEST_CASE("property_value") {
    CHECK(property_value(value_bit_at(0, {0}, 5), FieldPoly(5)) == 1); // f(0)=0 in {0}
    CHECK(property_value(value_bit_at(0, {0}, 5), FieldPoly({1, 3, 2}, 5)) == 0); // f(0)=1

    const auto parity = PropertySpec::parity_of_subset(
        {FieldElem(0, 2), FieldElem(1, 2)});
    CHECK(property_value(parity, FieldPoly({1}, 2)) == 0); // f == 1 on an even count
    CHECK(property_value(parity, FieldPoly({0, 1}, 2)) == 1); // f(0)=0, f(1)=1

    SUBCASE("four-point parity of the all-ones function is even") {
        std::vector<FieldElem> u4;
        for (std::uint32_t i = 0; i < 4; ++i) u4.emplace_back(i, 5);
        const auto par4 = PropertySpec::parity_of_subset(std::move(u4));
        CHECK(property_value(par4, FieldPoly({1}, 5)) == 0);
    }

    SUBCASE("inapplicable specs are rejected") {
        CHECK_THROWS_AS(property_value(value_bit_at(0, {0}, 5), FieldPoly({1}, 3)),
                        std::invalid_argument);
        // parity demands Boolean values at the subset points
        const auto par5 = PropertySpec::parity_of_subset({FieldElem(1, 5), FieldElem(2, 5)});
        CHECK_THROWS_AS(property_value(par5, FieldPoly({0, 2}, 5)), std::invalid_argument);
        CHECK_THROWS_AS(PropertySpec::value_bit(FieldElem(0, 3),
                                                {FieldElem(0, 3), FieldElem(1, 3), FieldElem(2, 3)}),
                        std::invalid_argument);
        CHECK_THROWS_AS(PropertySpec::coefficient_bit(5, 0, {FieldElem(0, 5)}),
                        std::invalid_argument);
    }
}

TEST_CASE("check_independence on the GF(3) line family") {
    const Family family = gf3_lines();

    SUBCASE("value bit outside the domain is 1-independent") {
        const auto report = check_independence(family, value_bit_at(0, {0}, 3), 1, ExceptionSet{});
        CHECK(report.holds);
        CHECK(report.budget_checked == 2); // |D|^d
        CHECK_FALSE(report.witness.has_value());
    }
    SUBCASE("value bit inside the domain fails with witness z1 = 1") {
        const auto report = check_independence(family, value_bit_at(1, {0}, 3), 1, ExceptionSet{});
        REQUIRE_FALSE(report.holds);
        REQUIRE(report.witness.has_value());
        CHECK(report.witness->tuple.size() == 1);
        CHECK(report.witness->tuple[0].value() == 1);
        CHECK(report.witness->distribution_a != report.witness->distribution_b);
    }
    SUBCASE("the same property is (1,{1})-independent") {
        const auto report = check_independence(family, value_bit_at(1, {0}, 3), 1,
                                               ExceptionSet{{FieldElem(1, 3)}});
        CHECK(report.holds);
    }
    SUBCASE("distinct-tuples flag leaves the verdicts unchanged") {
        IndependenceOptions opts;
        opts.distinct_tuples = true;
        CHECK(check_independence(family, value_bit_at(0, {0}, 3), 1, ExceptionSet{}, opts).holds);
        CHECK_FALSE(
            check_independence(family, value_bit_at(1, {0}, 3), 1, ExceptionSet{}, opts).holds);
    }
    SUBCASE("budget errors report the tuple count") {
        IndependenceOptions opts;
        opts.tuple_budget = 1;
        try {
            check_independence(family, value_bit_at(0, {0}, 3), 2, ExceptionSet{}, opts);
            FAIL("expected BudgetError");
        } catch (const BudgetError& e) {
            CHECK(e.required() == 4);
        }
    }
}

TEST_CASE("monomial_gap on the GF(3) line family") {
    const Family family = gf3_lines();
    const auto spec = value_bit_at(0, {0}, 3);

    SUBCASE("empty monomial has zero gap") {
        CHECK(monomial_gap(family, spec, DeltaMonomial{}) == Rational(0));
    }
    SUBCASE("degree-1 monomial: both conditional expectations are 1/3") {
        const DeltaMonomial m({{FieldElem(1, 3), FieldElem(0, 3)}});
        CHECK(monomial_gap(family, spec, m) == Rational(0));
    }
    SUBCASE("every degree-2 monomial pins the function and has nonzero gap") {
        for (std::uint32_t y1 = 0; y1 < 3; ++y1) {
            for (std::uint32_t y2 = 0; y2 < 3; ++y2) {
                const DeltaMonomial m({{FieldElem(1, 3), FieldElem(y1, 3)},
                                       {FieldElem(2, 3), FieldElem(y2, 3)}});
                CHECK(monomial_gap(family, spec, m) != Rational(0));
            }
        }
    }
    SUBCASE("points outside the domain are rejected") {
        const DeltaMonomial m({{FieldElem(0, 3), FieldElem(0, 3)}});
        CHECK_THROWS_AS(monomial_gap(family, spec, m), std::invalid_argument);
    }
}

TEST_CASE("monomials with repeated points are unrepresentable") {
    CHECK_THROWS_AS(DeltaMonomial({{FieldElem(1, 3), FieldElem(0, 3)},
                                   {FieldElem(1, 3), FieldElem(2, 3)}}),
                    std::invalid_argument);
}

TEST_CASE("max_gap_up_to_degree") {
    SUBCASE("degree 0 has no gap") {
        const auto r = max_gap_up_to_degree(gf3_lines(), value_bit_at(0, {0}, 3), 0);
        CHECK(r.max_abs_gap == Rational(0));
        CHECK(r.monomials_checked == 1);
    }
    SUBCASE("GF(5) quadratics: flat through degree 2, sharp at 3") {
        const std::vector<FieldElem> domain{FieldElem(1, 5), FieldElem(2, 5), FieldElem(3, 5),
                                            FieldElem(4, 5)};
        const Family family = enumerate_family(5, 2, domain);
        const auto spec = value_bit_at(0, {0, 1}, 5);

        const auto at2 = max_gap_up_to_degree(family, spec, 2);
        CHECK(at2.max_abs_gap == Rational(0));
        CHECK(at2.monomials_checked == 171);

        const auto at3 = max_gap_up_to_degree(family, spec, 3);
        CHECK(at3.max_abs_gap > Rational(0));
        CHECK(at3.attaining.degree() == 3);
    }
    SUBCASE("budget errors report the monomial count") {
        GapOptions opts;
        opts.monomial_budget = 10;
        CHECK_THROWS_AS(max_gap_up_to_degree(gf3_lines(), value_bit_at(0, {0}, 3), 2, opts),
                        BudgetError);
    }
}

TEST_CASE("independence implies zero gaps across the small matrix") {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (std::uint32_t d = 0; d <= 2; ++d) {
            // z = 0 excluded from the domain
            const auto domain = residues_excluding(p, {0});
            const Family family = enumerate_family(p, d, domain);
            const auto spec = value_bit_at(0, {0}, p);

            const auto report = check_independence(family, spec, d, ExceptionSet{});
            CHECK(report.holds);
            const auto gap = max_gap_up_to_degree(family, spec, d);
            CHECK(gap.max_abs_gap == Rational(0));
        }
    }
}

TEST_CASE("coefficient-bit properties are d-independent") {
    for (std::uint32_t p : {3u, 5u}) {
        for (std::uint32_t d = 1; d <= 2; ++d) {
            const auto domain = residues_excluding(p, {0});
            const Family family = enumerate_family(p, d, domain);
            for (std::size_t j = 1; j <= d; ++j) {
                const auto spec = PropertySpec::coefficient_bit(p, j, {FieldElem(0, p)});
                CHECK(check_independence(family, spec, d, ExceptionSet{}).holds);
            }
        }
    }
}

TEST_CASE("parity over U is (|U|-1)-independent for the full Boolean family") {
    // All functions on a 4-point domain = degree <= 3 polynomials over GF(2)
    // restricted to 2 points won't do; use the full function family instead:
    // all maps from a 2-point domain are the 4 linear polynomials on GF(2).
    const Family family = enumerate_family(2, 1, all_residues(2));
    const auto spec = PropertySpec::parity_of_subset(all_residues(2));
    // |U| = 2: knowing any single value says nothing about the parity.
    CHECK(check_independence(family, spec, 1, ExceptionSet{}).holds);
}

TEST_SUITE_END();
