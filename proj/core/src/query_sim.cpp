#include <qinterp/query_sim.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace qinterp {

QueryState QueryState::zero_state(std::vector<std::uint32_t> dims_in) {
    QueryState state;
    state.dims = std::move(dims_in);
    std::size_t total = 1;
    for (const auto d : state.dims) {
        if (d == 0) throw std::invalid_argument("register of size 0");
        total *= d;
    }
    state.amplitudes.assign(total, {0.0, 0.0});
    if (total > 0) state.amplitudes[0] = {1.0, 0.0};
    return state;
}

double QueryState::norm_sq() const noexcept {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

RandomOracle::RandomOracle(std::vector<FieldElem> x, std::vector<FieldElem> y)
    : X(std::move(x)), Y(std::move(y)) {
    if (X.empty() || X.size() != Y.size()) {
        throw std::invalid_argument("oracle arrangement and response sequences must have equal "
                                    "nonzero length");
    }
    const std::uint32_t px = X.front().modulus();
    const std::uint32_t py = Y.front().modulus();
    for (const auto& e : X) {
        if (e.modulus() != px) throw std::invalid_argument("mixed moduli in arrangement");
    }
    for (const auto& e : Y) {
        if (e.modulus() != py) throw std::invalid_argument("mixed moduli in responses");
    }
}

void apply_chosen_oracle(QueryState& state, ChosenOracle& oracle) {
    const std::size_t nx = oracle.f.size();
    const std::uint32_t p = oracle.f.modulus();
    if (state.dims.size() < 2 || state.dims[0] != nx || state.dims[1] != p) {
        throw std::invalid_argument("incompatible registers: oracle expects (|D|, p) = (" +
                                    std::to_string(nx) + ", " + std::to_string(p) + ")");
    }
    std::size_t tail = 1;
    for (std::size_t r = 2; r < state.dims.size(); ++r) tail *= state.dims[r];

    // Permutation of basis states: b -> b + f(x) within each x block.
    std::vector<std::complex<double>> next(state.amplitudes.size());
    const auto& values = oracle.f.values();
    for (std::size_t x = 0; x < nx; ++x) {
        const std::uint32_t fx = values[x].value();
        for (std::uint32_t b = 0; b < p; ++b) {
            const std::uint32_t b2 = (b + fx) % p;
            const std::size_t src = (x * p + b) * tail;
            const std::size_t dst = (x * p + b2) * tail;
            for (std::size_t c = 0; c < tail; ++c) next[dst + c] = state.amplitudes[src + c];
        }
    }
    state.amplitudes = std::move(next);
    ++state.query_count;
    ++oracle.applications;
}

void apply_random_oracle(QueryState& state, RandomOracle& oracle) {
    const std::size_t n = oracle.length();
    const std::uint32_t px = oracle.X.front().modulus();
    const std::uint32_t py = oracle.Y.front().modulus();
    if (state.dims.size() < 3 || state.dims[0] != n || state.dims[1] != px ||
        state.dims[2] != py) {
        throw std::invalid_argument("incompatible registers: oracle expects (n, px, py) = (" +
                                    std::to_string(n) + ", " + std::to_string(px) + ", " +
                                    std::to_string(py) + ")");
    }
    std::size_t tail = 1;
    for (std::size_t r = 3; r < state.dims.size(); ++r) tail *= state.dims[r];

    std::vector<std::complex<double>> next(state.amplitudes.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t xi = oracle.X[i].value();
        const std::uint32_t yi = oracle.Y[i].value();
        for (std::uint32_t a = 0; a < px; ++a) {
            const std::uint32_t a2 = (a + xi) % px;
            for (std::uint32_t b = 0; b < py; ++b) {
                const std::uint32_t b2 = (b + yi) % py;
                const std::size_t src = ((i * px + a) * py + b) * tail;
                const std::size_t dst = ((i * px + a2) * py + b2) * tail;
                for (std::size_t c = 0; c < tail; ++c) next[dst + c] = state.amplitudes[src + c];
            }
        }
    }
    state.amplitudes = std::move(next);
    ++state.query_count;
    ++oracle.applications;
}

FieldElem classical_query(ChosenOracle& oracle, const FieldElem& x) {
    ++oracle.applications;
    return oracle.f.value_at(x);
}

std::pair<FieldElem, FieldElem> classical_query(RandomOracle& oracle, std::uint32_t index) {
    if (index == 0 || index > oracle.length()) {
        throw std::invalid_argument("oracle index " + std::to_string(index) + " outside 1.." +
                                    std::to_string(oracle.length()));
    }
    ++oracle.applications;
    return {oracle.X[index - 1], oracle.Y[index - 1]};
}

DjParityResult run_dj_parity(ChosenOracle& oracle, const std::vector<FieldElem>& U) {
    if (U.empty()) throw std::invalid_argument("parity subset must be nonempty");
    if (oracle.f.modulus() != 2) {
        throw std::invalid_argument("parity algorithm requires the Boolean range GF(2)");
    }
    std::vector<int> positions;
    positions.reserve(U.size());
    for (const auto& u : U) {
        const int pos = oracle.f.position_of(u);
        if (pos < 0) {
            throw std::invalid_argument("parity point " + std::to_string(u.value()) +
                                        " not in the oracle domain");
        }
        positions.push_back(pos);
    }
    // Pair points in domain order.
    std::sort(positions.begin(), positions.end());

    const auto nx = static_cast<std::uint32_t>(oracle.f.size());
    constexpr double kInvSqrt2 = 0.70710678118654752440;

    const std::uint64_t start = oracle.applications;
    DjParityResult result;
    result.success_probability = 1.0;

    std::size_t t = 0;
    for (; t + 1 < positions.size(); t += 2) {
        const auto x0 = static_cast<std::size_t>(positions[t]);
        const auto x1 = static_cast<std::size_t>(positions[t + 1]);

        // (|x0> + |x1>)/sqrt2 (x) (|0> - |1>)/sqrt2, one query, then decode
        // in the {|x0> +- |x1>} basis: the relative sign carries the pair
        // parity.
        QueryState state = QueryState::zero_state({nx, 2});
        std::fill(state.amplitudes.begin(), state.amplitudes.end(), std::complex<double>{0, 0});
        state.amplitudes[x0 * 2 + 0] = {0.5, 0.0};
        state.amplitudes[x0 * 2 + 1] = {-0.5, 0.0};
        state.amplitudes[x1 * 2 + 0] = {0.5, 0.0};
        state.amplitudes[x1 * 2 + 1] = {-0.5, 0.0};
        apply_chosen_oracle(state, oracle);

        const std::complex<double> s0 =
            (state.amplitudes[x0 * 2 + 0] - state.amplitudes[x0 * 2 + 1]) * kInvSqrt2;
        const std::complex<double> s1 =
            (state.amplitudes[x1 * 2 + 0] - state.amplitudes[x1 * 2 + 1]) * kInvSqrt2;
        const double prob_even = std::norm((s0 + s1) * kInvSqrt2);
        const double prob_odd = std::norm((s0 - s1) * kInvSqrt2);

        const int measured = prob_odd > prob_even ? 1 : 0;
        result.parity ^= measured;
        result.success_probability *= measured ? prob_odd : prob_even;
    }
    if (t < positions.size()) {
        // Leftover point: |u, 0> -> |u, f(u)>, read the response register.
        const auto x = static_cast<std::size_t>(positions[t]);
        QueryState state = QueryState::zero_state({nx, 2});
        std::fill(state.amplitudes.begin(), state.amplitudes.end(), std::complex<double>{0, 0});
        state.amplitudes[x * 2 + 0] = {1.0, 0.0};
        apply_chosen_oracle(state, oracle);

        const double prob1 = std::norm(state.amplitudes[x * 2 + 1]);
        const int measured = prob1 > 0.5 ? 1 : 0;
        result.parity ^= measured;
        result.success_probability *= measured ? prob1 : std::norm(state.amplitudes[x * 2 + 0]);
    }
    result.queries_used = oracle.applications - start;
    return result;
}

GroverResult run_grover(RandomOracle& oracle, const ExceptionSet& marked_points,
                        std::uint32_t iterations) {
    const std::size_t n = oracle.length();
    if (n > (std::size_t{1} << 16)) {
        throw std::invalid_argument("oracle length exceeds the 2^16 simulation cap");
    }
    std::vector<std::size_t> marked;
    for (std::size_t i = 0; i < n; ++i) {
        if (marked_points.contains(oracle.X[i])) marked.push_back(i);
    }
    if (marked.empty()) {
        throw std::invalid_argument("nothing to find: no oracle index maps into the marked set");
    }

    const std::uint64_t start = oracle.applications;
    // Index register only; the phase mark consults X(i) through the oracle.
    std::vector<double> amp(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (std::uint32_t it = 0; it < iterations; ++it) {
        for (const auto i : marked) amp[i] = -amp[i];
        ++oracle.applications; // one query per Grover iteration
        const double mean = std::accumulate(amp.begin(), amp.end(), 0.0) / static_cast<double>(n);
        for (auto& a : amp) a = 2.0 * mean - a;
    }

    GroverResult result;
    result.index_distribution.reserve(n);
    for (const auto a : amp) result.index_distribution.push_back(a * a);
    for (const auto i : marked) result.success_probability += result.index_distribution[i];
    result.queries_used = oracle.applications - start;
    return result;
}

double grover_success_closed_form(std::uint64_t n, std::uint64_t marked,
                                  std::uint32_t iterations) {
    if (n == 0 || marked == 0 || marked > n) {
        throw std::invalid_argument("closed form needs 0 < marked <= n");
    }
    const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(n)));
    const double s = std::sin((2.0 * iterations + 1.0) * theta);
    return s * s;
}

InterpolationResult classical_interpolation_strategy(ChosenOracle& oracle, std::uint32_t d,
                                                     const FieldElem& z) {
    const auto& domain = oracle.f.domain();
    if (domain.size() < static_cast<std::size_t>(d) + 1) {
        throw std::invalid_argument("domain too small: interpolation needs d+1 = " +
                                    std::to_string(d + 1) + " points");
    }
    const std::uint64_t start = oracle.applications;
    std::vector<std::pair<FieldElem, FieldElem>> samples;
    samples.reserve(d + 1);
    for (std::uint32_t i = 0; i <= d; ++i) {
        samples.emplace_back(domain[i], classical_query(oracle, domain[i]));
    }
    const FieldPoly poly = lagrange_interpolate(samples, oracle.f.modulus());

    InterpolationResult result;
    result.success = true;
    result.estimate = evaluate(poly, z);
    result.queries_used = oracle.applications - start;
    return result;
}

InterpolationResult classical_interpolation_strategy(RandomOracle& oracle, std::uint32_t d,
                                                     const FieldElem& z, std::uint64_t budget) {
    const std::uint64_t start = oracle.applications;
    InterpolationResult result;
    std::vector<std::pair<FieldElem, FieldElem>> samples;
    std::unordered_set<std::uint32_t> seen;
    for (std::uint32_t i = 1; i <= oracle.length() && i <= budget; ++i) {
        const auto [x, y] = classical_query(oracle, i);
        if (seen.insert(x.value()).second) samples.emplace_back(x, y);
        if (samples.size() == static_cast<std::size_t>(d) + 1) break;
    }
    result.queries_used = oracle.applications - start;
    if (samples.size() < static_cast<std::size_t>(d) + 1) {
        result.success = false; // budget exhausted, explicit failure
        return result;
    }
    const FieldPoly poly = lagrange_interpolate(samples, z.modulus());
    result.success = true;
    result.estimate = evaluate(poly, z);
    return result;
}

} // namespace qinterp
