#include <qinterp/polymethod_lp.hpp>

#include <doctest.h>

#include <sstream>
#include <vector>

using namespace qinterp;

namespace {

PropertySpec value_bit_at(std::uint32_t z, std::vector<std::uint32_t> accept, std::uint32_t p) {
    std::vector<FieldElem> a;
    for (const auto v : accept) a.emplace_back(v, p);
    return PropertySpec::value_bit(FieldElem(z, p), std::move(a));
}

} // namespace

TEST_SUITE_BEGIN("polymethod_lp");

TEST_CASE("basis counts") {
    CHECK(enumerate_basis(all_residues(5), all_residues(5), 0).size() == 1);
    CHECK(enumerate_basis({FieldElem(1, 3), FieldElem(2, 3)}, all_residues(3), 1).size() == 7);
    const std::vector<FieldElem> d4{FieldElem(1, 5), FieldElem(2, 5), FieldElem(3, 5),
                                    FieldElem(4, 5)};
    CHECK(enumerate_basis(d4, all_residues(5), 2).size() == 171);

    SUBCASE("budget errors carry the required count") {
        try {
            enumerate_basis(d4, all_residues(5), 2, 100);
            FAIL("expected BudgetError");
        } catch (const BudgetError& e) {
            CHECK(e.required() == 171);
        }
    }
    SUBCASE("deterministic order: empty monomial first, then by degree") {
        const auto basis = enumerate_basis({FieldElem(1, 3), FieldElem(2, 3)}, all_residues(3), 2);
        CHECK(basis.monomials()[0].degree() == 0);
        CHECK(basis.monomials()[1].degree() == 1);
        CHECK(basis.monomials()[1].factors()[0].first.value() == 1);
        CHECK(basis.monomials()[1].factors()[0].second.value() == 0);
        CHECK(basis.monomials().back().degree() == 2);
    }
}

TEST_CASE("row counts of the feasibility system") {
    SUBCASE("GF(2) constants on one point") {
        const Family family = enumerate_family(2, 0, {FieldElem(0, 2)});
        const auto spec = value_bit_at(0, {1}, 2);
        const auto lp = build_feasibility_lp(family, spec, 1, 0.5);
        CHECK(lp.box_row_count == 4);                 // 2 functions x 2 rows
        CHECK(lp.rows.size() == 4 + 2);               // + one row per member
    }
    SUBCASE("GF(3) lines on two points") {
        const Family family = enumerate_family(3, 1, {FieldElem(1, 3), FieldElem(2, 3)});
        const auto lp = build_feasibility_lp(family, value_bit_at(0, {0}, 3), 1, 0.25);
        CHECK(lp.box_row_count == 18);                // 2 * 3^2
        CHECK(lp.rows.size() == 18 + 9);
    }
}

TEST_CASE("lp_feasible on hand-built instances") {
    const Family family = enumerate_family(3, 1, {FieldElem(1, 3), FieldElem(2, 3)});
    auto lp = build_feasibility_lp(family, value_bit_at(0, {0}, 3), 1, 0.25);

    SUBCASE("no separation rows: p == 1/2 works") {
        lp.rows.resize(lp.box_row_count);
        const auto verdict = lp_feasible(lp);
        CHECK(verdict.status == LpVerdict::Status::Feasible);
        CHECK(verdict.max_violation <= 1e-7);
    }
    SUBCASE("contradictory demands on one function are infeasible") {
        lp.rows.resize(lp.box_row_count);
        LpRow ge;
        ge.coeffs.assign(lp.basis.size(), 0);
        ge.coeffs[0] = 1; // the empty monomial: p(f) constant term
        ge.rel = Relation::GreaterEq;
        ge.bound = 0.75;
        ge.bound_exact = Rational(3, 4);
        LpRow le = ge;
        le.rel = Relation::LessEq;
        le.bound = 0.25;
        le.bound_exact = Rational(1, 4);
        // force p(f) >= 3/4 and p(f) <= 1/4 for the same all-ones row
        for (auto& c : ge.coeffs) c = 1;
        le.coeffs = ge.coeffs;
        lp.rows.push_back(ge);
        lp.rows.push_back(le);
        CHECK(lp_feasible(lp).status == LpVerdict::Status::Infeasible);
    }
}

TEST_CASE("zero exact gaps force LP infeasibility at the same degree") {
    const Family family = enumerate_family(3, 1, {FieldElem(1, 3), FieldElem(2, 3)});
    const auto spec = value_bit_at(0, {0}, 3);
    REQUIRE(max_gap_up_to_degree(family, spec, 1).max_abs_gap == Rational(0));
    for (const double eps : {1e-3, 0.1, 0.5}) {
        const auto lp = build_feasibility_lp(family, spec, 1, eps);
        CHECK(lp_feasible(lp).status == LpVerdict::Status::Infeasible);
    }
}

TEST_CASE("min separating degree on the GF(3) line family") {
    const Family family = enumerate_family(3, 1, {FieldElem(1, 3), FieldElem(2, 3)});
    const auto spec = value_bit_at(0, {0}, 3);

    const auto result = min_separating_degree(family, spec, 0.5, 3);
    REQUIRE(result.degree.has_value());
    CHECK(*result.degree == 2);
    CHECK(query_lower_bound_from_degree(*result.degree) == 1); // (d+1)/2 for d=1

    SUBCASE("witness satisfies every row and upgrades to exact rationals") {
        REQUIRE(result.verdict.has_value());
        CHECK(result.verdict->max_violation <= 1e-7);
        CHECK(result.verdict->exact_witness.has_value());
    }
    SUBCASE("monotone: feasible at T stays feasible at T+1") {
        const auto at2 = lp_feasible(build_feasibility_lp(family, spec, 2, 0.5));
        const auto at3 = lp_feasible(build_feasibility_lp(family, spec, 3, 0.5));
        CHECK(at2.status == LpVerdict::Status::Feasible);
        CHECK(at3.status == LpVerdict::Status::Feasible);
    }
    SUBCASE("verdicts and witnesses are bit-for-bit reproducible") {
        const auto a = lp_feasible(build_feasibility_lp(family, spec, 2, 0.5));
        const auto b = lp_feasible(build_feasibility_lp(family, spec, 2, 0.5));
        REQUIRE(a.witness.has_value());
        REQUIRE(b.witness.has_value());
        CHECK(*a.witness == *b.witness);
        CHECK(a.iterations == b.iterations);
    }
}

TEST_CASE("trivial properties are rejected at build time") {
    // Parity of both points over the constant family: always 0.
    const Family family = enumerate_family(2, 0, all_residues(2));
    const auto spec = PropertySpec::parity_of_subset(all_residues(2));
    CHECK_THROWS_WITH_AS(build_feasibility_lp(family, spec, 1, 0.5),
                         doctest::Contains("trivial"), std::invalid_argument);
}

TEST_CASE("query bound conversion") {
    CHECK(query_lower_bound_from_degree(0) == 0);
    CHECK(query_lower_bound_from_degree(3) == 2);
    CHECK(query_lower_bound_from_degree(4) == 2); // (d+1)/2 for d = 3
}

TEST_CASE("plain text export lists one row per line") {
    const Family family = enumerate_family(2, 0, {FieldElem(0, 2)});
    const auto lp = build_feasibility_lp(family, value_bit_at(0, {1}, 2), 1, 0.5);
    std::ostringstream os;
    write_lp_text(lp, os);
    const std::string text = os.str();
    CHECK(text.find("# rows=6") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 7); // header + 6 rows
    CHECK(text.find(">=") != std::string::npos);
    CHECK(text.find("<=") != std::string::npos);
}

TEST_SUITE_END();
