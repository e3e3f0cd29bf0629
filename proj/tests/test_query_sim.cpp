#include <qinterp/query_sim.hpp>

#include <qinterp/polymethod_lp.hpp>

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace qinterp;

namespace {

QueryState random_state(std::vector<std::uint32_t> dims, std::uint64_t seed) {
    QueryState state = QueryState::zero_state(std::move(dims));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    double norm = 0.0;
    for (auto& a : state.amplitudes) {
        a = {gauss(rng), gauss(rng)};
        norm += std::norm(a);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : state.amplitudes) a *= scale;
    return state;
}

// Boolean-valued table on a domain drawn from a larger field, so parity
// subsets can exceed two points.
FunctionTable table_from_bits(const std::vector<std::uint32_t>& bits) {
    std::vector<FieldElem> domain, values;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        domain.emplace_back(i, 5);
        values.emplace_back(bits[i], 2);
    }
    return FunctionTable(std::move(domain), std::move(values));
}

} // namespace

TEST_SUITE_BEGIN("query_sim");

TEST_CASE("chosen oracle") {
    const std::vector<FieldElem> domain{FieldElem(1, 5), FieldElem(2, 5), FieldElem(3, 5)};

    SUBCASE("zero function acts as the identity") {
        ChosenOracle oracle(FunctionTable::tabulate(FieldPoly(5), domain));
        QueryState state = random_state({3, 5}, 1);
        const auto before = state.amplitudes;
        apply_chosen_oracle(state, oracle);
        CHECK(state.amplitudes == before);
        CHECK(state.query_count == 1);
        CHECK(oracle.applications == 1);
    }
    SUBCASE("basis states map |x,0> -> |x,f(x)>") {
        const FieldPoly f({1, 3, 2}, 5);
        ChosenOracle oracle(FunctionTable::tabulate(f, domain));
        QueryState state = QueryState::zero_state({3, 5});
        // |x = domain[1], b = 0>
        state.amplitudes.assign(state.dimension(), {0, 0});
        state.amplitudes[1 * 5 + 0] = {1, 0};
        apply_chosen_oracle(state, oracle);
        const std::uint32_t expected = evaluate(f, domain[1]).value();
        CHECK(std::norm(state.amplitudes[1 * 5 + expected]) == doctest::Approx(1.0));
    }
    SUBCASE("Boolean double application is the identity") {
        std::mt19937_64 rng(3);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<std::uint32_t> bits{static_cast<std::uint32_t>(rng() & 1),
                                            static_cast<std::uint32_t>(rng() & 1),
                                            static_cast<std::uint32_t>(rng() & 1)};
            ChosenOracle oracle(table_from_bits(bits));
            QueryState state = random_state({3, 2}, 100 + trial);
            const auto before = state.amplitudes;
            apply_chosen_oracle(state, oracle);
            apply_chosen_oracle(state, oracle);
            for (std::size_t i = 0; i < before.size(); ++i) {
                CHECK(std::abs(state.amplitudes[i] - before[i]) < 1e-12);
            }
        }
    }
    SUBCASE("register mismatch is rejected") {
        ChosenOracle oracle(FunctionTable::tabulate(FieldPoly(5), domain));
        QueryState state = QueryState::zero_state({4, 5});
        CHECK_THROWS_AS(apply_chosen_oracle(state, oracle), std::invalid_argument);
    }
}

TEST_CASE("random oracle") {
    SUBCASE("basis states pick up (X(i), Y(i))") {
        RandomOracle oracle({FieldElem(2, 3), FieldElem(1, 3)},
                            {FieldElem(1, 3), FieldElem(0, 3)});
        QueryState state = QueryState::zero_state({2, 3, 3});
        apply_random_oracle(state, oracle); // |0,0,0> -> |0, X(1), Y(1)>
        CHECK(std::norm(state.amplitudes[(0 * 3 + 2) * 3 + 1]) == doctest::Approx(1.0));
        CHECK(oracle.applications == 1);
    }
    SUBCASE("norm is preserved on random states, n = 256") {
        std::vector<FieldElem> X, Y;
        for (std::uint32_t i = 0; i < 256; ++i) {
            X.emplace_back(i % 5, 5);
            Y.emplace_back((3 * i + 1) % 5, 5);
        }
        RandomOracle oracle(std::move(X), std::move(Y));
        QueryState state = random_state({256, 5, 5}, 9);
        apply_random_oracle(state, oracle);
        CHECK(state.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("deutsch-jozsa parity") {
    SUBCASE("single point costs one query") {
        ChosenOracle oracle(table_from_bits({1, 0}));
        const auto result = run_dj_parity(oracle, {FieldElem(0, 5)});
        CHECK(result.parity == 1);
        CHECK(result.queries_used == 1);
        CHECK(result.success_probability == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("four ones have even parity with two queries") {
        ChosenOracle oracle(table_from_bits({1, 1, 1, 1}));
        std::vector<FieldElem> U;
        for (std::uint32_t i = 0; i < 4; ++i) U.emplace_back(i, 5);
        const auto result = run_dj_parity(oracle, U);
        CHECK(result.parity == 0);
        CHECK(result.queries_used == 2);
    }
    SUBCASE("exhaustive over all 16 restrictions on |U| = 4") {
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            std::vector<std::uint32_t> bits(4);
            int expected = 0;
            for (std::uint32_t i = 0; i < 4; ++i) {
                bits[i] = (mask >> i) & 1;
                expected ^= static_cast<int>(bits[i]);
            }
            ChosenOracle oracle(table_from_bits(bits));
            std::vector<FieldElem> U;
            for (std::uint32_t i = 0; i < 4; ++i) U.emplace_back(i, 5);
            const auto result = run_dj_parity(oracle, U);
            CHECK(result.parity == expected);
            CHECK(result.queries_used == 2); // (d+1)/2 for d = 3
            CHECK(result.success_probability == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(result.queries_used == oracle.applications);
        }
    }
    SUBCASE("odd subsets round up") {
        ChosenOracle oracle(table_from_bits({1, 0, 1}));
        std::vector<FieldElem> U;
        for (std::uint32_t i = 0; i < 3; ++i) U.emplace_back(i, 5);
        const auto result = run_dj_parity(oracle, U);
        CHECK(result.parity == 0);
        CHECK(result.queries_used == 2); // ceil(3/2)
    }
    SUBCASE("non-Boolean ranges are rejected") {
        ChosenOracle oracle(
            FunctionTable::tabulate(FieldPoly({1}, 3), {FieldElem(0, 3), FieldElem(1, 3)}));
        CHECK_THROWS_AS(run_dj_parity(oracle, {FieldElem(0, 3)}), std::invalid_argument);
    }
}

TEST_CASE("grover search") {
    const auto identity_oracle = [](std::uint32_t n, std::uint32_t p) {
        std::vector<FieldElem> X, Y;
        for (std::uint32_t i = 0; i < n; ++i) {
            X.emplace_back(i % p, p);
            Y.emplace_back(0, p);
        }
        return RandomOracle(std::move(X), std::move(Y));
    };

    SUBCASE("n=4 with one marked index succeeds after one iteration") {
        RandomOracle oracle(
            {FieldElem(0, 5), FieldElem(1, 5), FieldElem(2, 5), FieldElem(3, 5)},
            {FieldElem(0, 5), FieldElem(0, 5), FieldElem(0, 5), FieldElem(0, 5)});
        const auto result = run_grover(oracle, ExceptionSet{{FieldElem(2, 5)}}, 1);
        CHECK(result.success_probability == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(result.queries_used == 1);
    }
    SUBCASE("everything marked succeeds with zero iterations") {
        auto oracle = identity_oracle(8, 11);
        std::vector<FieldElem> all;
        for (std::uint32_t v = 0; v < 8; ++v) all.emplace_back(v, 11);
        const auto result = run_grover(oracle, ExceptionSet{std::move(all)}, 0);
        CHECK(result.success_probability == doctest::Approx(1.0));
        CHECK(result.queries_used == 0);
    }
    SUBCASE("empty marked set is a distinct error") {
        auto oracle = identity_oracle(8, 11);
        CHECK_THROWS_WITH_AS(run_grover(oracle, ExceptionSet{{FieldElem(9, 11)}}, 1),
                             doctest::Contains("nothing to find"), std::invalid_argument);
    }
    SUBCASE("simulator tracks the closed form across a parameter grid") {
        for (const std::uint32_t n : {16u, 64u, 256u, 1024u}) {
            for (const std::uint32_t marked : {1u, 2u, 4u, 8u}) {
                std::vector<FieldElem> X, Y;
                const std::uint32_t p = 1031; // prime > n
                for (std::uint32_t i = 0; i < n; ++i) {
                    X.emplace_back(i, p);
                    Y.emplace_back(0, p);
                }
                RandomOracle oracle(std::move(X), std::move(Y));
                std::vector<FieldElem> targets;
                for (std::uint32_t v = 0; v < marked; ++v) targets.emplace_back(v, p);
                const ExceptionSet S(std::move(targets));
                for (const std::uint32_t k : {0u, 1u, 5u, 25u, 50u}) {
                    RandomOracle fresh = oracle;
                    const auto result = run_grover(fresh, S, k);
                    const double closed = grover_success_closed_form(n, marked, k);
                    CHECK(std::fabs(result.success_probability - closed) <= 1e-6);
                }
            }
        }
    }
}

TEST_CASE("classical interpolation strategy") {
    SUBCASE("degree 0 is a single read") {
        ChosenOracle oracle(FunctionTable::tabulate(FieldPoly({4}, 5), {FieldElem(1, 5)}));
        const auto result = classical_interpolation_strategy(oracle, 0, FieldElem(0, 5));
        CHECK(result.success);
        CHECK(result.queries_used == 1);
        CHECK(result.estimate == FieldElem(4, 5));
    }
    SUBCASE("GF(5) quadratic read off at zero") {
        const FieldPoly f({1, 3, 2}, 5); // f(0) = 1
        ChosenOracle oracle(FunctionTable::tabulate(
            f, {FieldElem(1, 5), FieldElem(2, 5), FieldElem(3, 5), FieldElem(4, 5)}));
        const auto result = classical_interpolation_strategy(oracle, 2, FieldElem(0, 5));
        CHECK(result.success);
        CHECK(result.queries_used == 3);
        CHECK(result.estimate == FieldElem(1, 5));
        CHECK(result.queries_used == oracle.applications);
    }
    SUBCASE("random model with a permutation arrangement uses exactly d+1 queries") {
        const FieldPoly f({1, 3, 2}, 5);
        std::vector<FieldElem> X{FieldElem(3, 5), FieldElem(1, 5), FieldElem(4, 5),
                                 FieldElem(2, 5)};
        std::vector<FieldElem> Y;
        for (const auto& x : X) Y.push_back(evaluate(f, x));
        RandomOracle oracle(std::move(X), std::move(Y));
        const auto result = classical_interpolation_strategy(oracle, 2, FieldElem(0, 5), 3);
        CHECK(result.success);
        CHECK(result.queries_used == 3);
        CHECK(result.estimate == FieldElem(1, 5));
    }
    SUBCASE("an exhausted budget fails explicitly instead of guessing") {
        // X repeats one point, so two distinct values never arrive.
        std::vector<FieldElem> X(4, FieldElem(1, 5));
        std::vector<FieldElem> Y(4, FieldElem(2, 5));
        RandomOracle oracle(std::move(X), std::move(Y));
        const auto result = classical_interpolation_strategy(oracle, 1, FieldElem(0, 5), 4);
        CHECK_FALSE(result.success);
        CHECK(result.queries_used == 4);
        CHECK_FALSE(result.estimate.has_value());
    }
}

TEST_CASE("upper and lower bounds sandwich within a factor of two") {
    // For every (p <= 5, d <= 3, z not in D): interpolation succeeds with
    // d+1 queries while the exact gap engine certifies ceil((d+1)/2).
    for (const std::uint32_t p : {2u, 3u, 5u}) {
        const std::vector<FieldElem> domain = residues_excluding(p, {0});
        for (std::uint32_t d = 0; d <= 3 && d + 1 <= domain.size(); ++d) {
            const Family family = enumerate_family(p, d, domain);
            const auto spec = PropertySpec::value_bit(FieldElem(0, p), {FieldElem(0, p)});

            // lower bound: exact zero gaps at degree d certify >= ceil((d+1)/2)
            CHECK(max_gap_up_to_degree(family, spec, d).max_abs_gap == Rational(0));
            const std::uint32_t lower = query_lower_bound_from_degree(d + 1);

            // upper bound: classical interpolation with d+1 queries
            const FieldPoly f = family.member_poly(family.size() - 1);
            ChosenOracle oracle(FunctionTable::tabulate(f, domain));
            const auto run = classical_interpolation_strategy(oracle, d, FieldElem(0, p));
            CHECK(run.success);
            CHECK(run.queries_used == d + 1);
            CHECK(run.estimate == evaluate(f, FieldElem(0, p)));

            CHECK(run.queries_used <= 2 * lower + 1); // factor 2 plus rounding
        }
    }
}

TEST_SUITE_END();
