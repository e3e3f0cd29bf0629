#pragma once

#include <qinterp/finite_field.hpp>
#include <qinterp/independence.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace qinterp {

/// Amplitude vector over a product of registers.  dims lists the register
/// sizes; basis index (r0, r1, ...) is stored row-major (last register
/// fastest).  query_count tracks oracle applications on this state.
struct QueryState {
    std::vector<std::uint32_t> dims;
    std::vector<std::complex<double>> amplitudes;
    std::uint64_t query_count = 0;

    static QueryState zero_state(std::vector<std::uint32_t> dims);

    std::size_t dimension() const noexcept { return amplitudes.size(); }
    double norm_sq() const noexcept;
};

/// Chosen-input oracle |x, b, c> -> |x, b + f(x), c>.  The x register holds
/// positions into f's domain sequence; the b register holds GF(p) values.
/// `applications` audits the query count independently of any algorithm's
/// own bookkeeping.
struct ChosenOracle {
    FunctionTable f;
    std::uint64_t applications = 0;

    explicit ChosenOracle(FunctionTable table) : f(std::move(table)) {}
};

/// Random-input oracle |i, a, b, c> -> |i, a + X(i), b + Y(i), c> hiding an
/// arrangement X and responses Y = f(X(.)).
struct RandomOracle {
    std::vector<FieldElem> X;
    std::vector<FieldElem> Y;
    std::uint64_t applications = 0;

    RandomOracle(std::vector<FieldElem> x, std::vector<FieldElem> y);

    std::size_t length() const noexcept { return X.size(); }
};

/// Applies the oracle permutation to the state (registers: x = domain
/// position, b = GF(p) response, optional workspace).  Unitary; increments
/// both the state's query_count and the oracle's application counter.
void apply_chosen_oracle(QueryState& state, ChosenOracle& oracle);

/// Registers: i (n-dim), a (GF(p)), b (GF(p)), optional workspace.
void apply_random_oracle(QueryState& state, RandomOracle& oracle);

/// Classical lookup through the oracle; costs one application.
FieldElem classical_query(ChosenOracle& oracle, const FieldElem& x);
std::pair<FieldElem, FieldElem> classical_query(RandomOracle& oracle, std::uint32_t index);

struct DjParityResult {
    int parity = 0;
    std::uint64_t queries_used = 0;
    double success_probability = 0.0;
};

/// Parity of f over U for a Boolean f, by phase kickback on pairs of points
/// (domain order), ceil(|U|/2) queries total.
DjParityResult run_dj_parity(ChosenOracle& oracle, const std::vector<FieldElem>& U);

struct GroverResult {
    double success_probability = 0.0;
    std::vector<double> index_distribution; // |amplitude|^2 per oracle index
    std::uint64_t queries_used = 0;
};

/// Standard Grover iteration (phase mark on indices with X(i) in S, then
/// inversion about the mean) from the uniform start; one query per
/// iteration.  Throws std::invalid_argument when no index is marked.
GroverResult run_grover(RandomOracle& oracle, const ExceptionSet& marked_points,
                        std::uint32_t iterations);

/// Closed-form Grover success probability sin^2((2k+1) asin(sqrt(M/N))).
double grover_success_closed_form(std::uint64_t n, std::uint64_t marked, std::uint32_t iterations);

struct InterpolationResult {
    bool success = false;
    std::optional<FieldElem> estimate;
    std::uint64_t queries_used = 0;
};

/// Chosen model: query the first d+1 domain points, interpolate, evaluate
/// at z; exactly d+1 queries.
InterpolationResult classical_interpolation_strategy(ChosenOracle& oracle, std::uint32_t d,
                                                     const FieldElem& z);

/// Random model: query indices 1, 2, ... until d+1 distinct arrangement
/// points are seen or the budget runs out; an exhausted budget is an
/// explicit failure, never a wrong answer.
InterpolationResult classical_interpolation_strategy(RandomOracle& oracle, std::uint32_t d,
                                                     const FieldElem& z, std::uint64_t budget);

} // namespace qinterp
