#include <qinterp/hard_instances.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace qinterp {

std::uint32_t BlockTemplate::response_at(std::uint32_t position) const {
    if (position == 0 || position > n) {
        throw std::invalid_argument("position " + std::to_string(position) + " outside 1.." +
                                    std::to_string(n));
    }
    if (position > static_cast<std::uint64_t>(B) * k) return 0; // tail
    const std::uint32_t i0 = (position - 1) % k + 1;
    const std::uint32_t j = (position - i0) / k;
    return (j % 2 == 0) ? g_values[i0 - 1] : h_values[i0 - 1];
}

BlockTemplate make_block_template(std::uint32_t n, std::uint32_t k,
                                  std::vector<std::uint32_t> g_values,
                                  std::vector<std::uint32_t> h_values,
                                  std::vector<std::uint32_t> z_order) {
    if (k == 0 || k > n) {
        throw std::invalid_argument("block size k must satisfy 1 <= k <= n");
    }
    if (z_order.size() != n) {
        throw std::invalid_argument("z_order must list all n points");
    }
    if (g_values.size() != k || h_values.size() != k) {
        throw std::invalid_argument("g and h value sequences must have length k");
    }
    std::unordered_set<std::uint32_t> seen;
    for (const auto z : z_order) {
        if (!seen.insert(z).second) {
            throw std::invalid_argument("duplicate point label " + std::to_string(z));
        }
    }
    BlockTemplate tmpl;
    tmpl.n = n;
    tmpl.k = k;
    tmpl.B = n / k;
    tmpl.z_order = std::move(z_order);
    tmpl.g_values = std::move(g_values);
    tmpl.h_values = std::move(h_values);
    return tmpl;
}

BlockInstance build_block_instance(const BlockTemplate& tmpl,
                                   const std::vector<std::uint32_t>& pi) {
    if (pi.size() != tmpl.B) {
        throw std::invalid_argument("pi must map {0..B-1}, got " + std::to_string(pi.size()) +
                                    " entries for B=" + std::to_string(tmpl.B));
    }
    for (const auto v : pi) {
        if (v >= tmpl.B) {
            throw std::invalid_argument("pi value " + std::to_string(v) + " outside 0..B-1");
        }
    }

    BlockInstance inst;
    inst.tmpl = tmpl;
    inst.pi = pi;
    inst.X.resize(tmpl.n);
    inst.Y.resize(tmpl.n);

    const std::uint32_t bk = tmpl.B * tmpl.k;
    for (std::uint32_t j = 0; j < tmpl.B; ++j) {
        for (std::uint32_t i = 1; i <= tmpl.k; ++i) {
            const std::uint32_t pos = i + tmpl.k * j;
            inst.X[pos - 1] = tmpl.z_order[i + tmpl.k * pi[j] - 1];
            inst.Y[pos - 1] = (j % 2 == 0) ? tmpl.g_values[i - 1] : tmpl.h_values[i - 1];
        }
    }
    for (std::uint32_t pos = bk + 1; pos <= tmpl.n; ++pos) {
        inst.X[pos - 1] = tmpl.z_order[pos - 1];
        inst.Y[pos - 1] = 0;
    }
    return inst;
}

BlockInstance build_block_instance(std::uint32_t n, std::uint32_t k,
                                   const std::vector<std::uint32_t>& pi,
                                   std::vector<std::uint32_t> g_values,
                                   std::vector<std::uint32_t> h_values,
                                   std::vector<std::uint32_t> z_order) {
    return build_block_instance(
        make_block_template(n, k, std::move(g_values), std::move(h_values), std::move(z_order)),
        pi);
}

void DeltaXiPoly::add_term(DeltaXiMonomial monomial, const Rational& coefficient) {
    std::sort(monomial.begin(), monomial.end());
    for (std::size_t i = 1; i < monomial.size(); ++i) {
        if (monomial[i - 1].position == monomial[i].position) {
            throw std::invalid_argument("monomial repeats position " +
                                        std::to_string(monomial[i].position));
        }
    }
    auto it = terms_.find(monomial);
    if (it == terms_.end()) {
        if (coefficient != 0) terms_.emplace(std::move(monomial), coefficient);
    } else {
        it->second += coefficient;
        if (it->second == 0) terms_.erase(it);
    }
}

std::size_t DeltaXiPoly::degree() const noexcept {
    std::size_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.size());
    return d;
}

void EtaPolynomial::add_term(EtaMonomial monomial, const Rational& coefficient) {
    std::sort(monomial.begin(), monomial.end());
    for (std::size_t i = 1; i < monomial.size(); ++i) {
        if (monomial[i - 1].first == monomial[i].first) {
            throw std::invalid_argument("eta monomial repeats block index " +
                                        std::to_string(monomial[i].first));
        }
    }
    for (const auto& [i, j] : monomial) {
        if (i >= B_ || j >= B_) {
            throw std::invalid_argument("eta index outside 0..B-1");
        }
    }
    degree_cap_ = std::max(degree_cap_, monomial.size());
    auto it = terms_.find(monomial);
    if (it == terms_.end()) {
        if (coefficient != 0) terms_.emplace(std::move(monomial), coefficient);
    } else {
        it->second += coefficient;
        if (it->second == 0) terms_.erase(it);
    }
}

std::size_t EtaPolynomial::degree() const noexcept {
    std::size_t d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.size());
    return d;
}

Rational EtaPolynomial::evaluate(const std::vector<std::uint32_t>& pi) const {
    Rational out(0);
    for (const auto& [monomial, coeff] : terms_) {
        bool match = true;
        for (const auto& [i, j] : monomial) {
            if (pi[i] != j) {
                match = false;
                break;
            }
        }
        if (match) out += coeff;
    }
    return out;
}

namespace {

// Reduction of one indicator variable under the block structure:
// constant 0/1 or a single eta factor.
struct VarReduction {
    enum class Kind { Zero, One, Eta } kind = Kind::Zero;
    std::uint32_t i = 0, j = 0;
};

VarReduction reduce_var(const DeltaXiVar& var, const BlockTemplate& tmpl,
                        const std::unordered_map<std::uint32_t, std::uint32_t>& index_of_point) {
    if (var.position == 0 || var.position > tmpl.n) {
        throw std::invalid_argument("variable references position " +
                                    std::to_string(var.position) + " outside 1.." +
                                    std::to_string(tmpl.n));
    }
    const auto found = index_of_point.find(var.point);
    const std::uint32_t m = (found == index_of_point.end()) ? 0 : found->second; // 1-based

    if (var.response) {
        // delta variable: point must be exceptional
        if (m == 0 || m > tmpl.k) {
            throw std::invalid_argument("delta variable point " + std::to_string(var.point) +
                                        " is not an exception point");
        }
    } else {
        if (m != 0 && m <= tmpl.k) {
            throw std::invalid_argument("xi variable point " + std::to_string(var.point) +
                                        " is an exception point; use a delta variable");
        }
    }

    const std::uint64_t bk = static_cast<std::uint64_t>(tmpl.B) * tmpl.k;
    if (var.position > bk) {
        // Tail: X is pinned to z_position, responses never matter (the tail
        // point is not exceptional, so no delta variable survives above).
        if (var.response) return {VarReduction::Kind::Zero};
        const bool hit = (m != 0 && m == var.position);
        return {hit ? VarReduction::Kind::One : VarReduction::Kind::Zero};
    }

    const std::uint32_t i0 = (var.position - 1) % tmpl.k + 1;
    const std::uint32_t j = (var.position - i0) / tmpl.k;

    if (var.response && tmpl.response_at(var.position) != *var.response) {
        return {VarReduction::Kind::Zero};
    }
    if (m == 0) return {VarReduction::Kind::Zero}; // point absent from the arrangement

    // X(i0 + kj) = z_{i0 + k*pi(j)} equals z_m iff pi(j) = (m - i0)/k.
    if (m < i0 || (m - i0) % tmpl.k != 0) return {VarReduction::Kind::Zero};
    const std::uint32_t jp = (m - i0) / tmpl.k;
    if (jp >= tmpl.B) return {VarReduction::Kind::Zero};
    return {VarReduction::Kind::Eta, j, jp};
}

} // namespace

EtaPolynomial eta_reduce(const DeltaXiPoly& poly, const BlockTemplate& tmpl) {
    std::unordered_map<std::uint32_t, std::uint32_t> index_of_point;
    for (std::uint32_t i = 0; i < tmpl.n; ++i) index_of_point.emplace(tmpl.z_order[i], i + 1);

    EtaPolynomial out(tmpl.B, poly.degree());
    for (const auto& [monomial, coeff] : poly.terms()) {
        bool vanished = false;
        std::map<std::uint32_t, std::uint32_t> eta; // block index -> target
        for (const auto& var : monomial) {
            const VarReduction red = reduce_var(var, tmpl, index_of_point);
            if (red.kind == VarReduction::Kind::Zero) {
                vanished = true;
                break;
            }
            if (red.kind == VarReduction::Kind::One) continue;
            const auto it = eta.find(red.i);
            if (it == eta.end()) {
                eta.emplace(red.i, red.j);
            } else if (it->second != red.j) {
                vanished = true; // pi(i) cannot take two values
                break;
            }
        }
        if (vanished) continue;
        EtaMonomial em(eta.begin(), eta.end());
        out.add_term(std::move(em), coeff);
    }
    return out;
}

DeltaXiPoly block_parity_standin(const BlockTemplate& tmpl) {
    DeltaXiPoly poly;
    for (std::uint32_t j = 1; j < tmpl.B; j += 2) {
        DeltaXiVar var;
        var.position = 1 + tmpl.k * j;
        var.point = tmpl.z_order[0];
        var.response = tmpl.h_values[0];
        poly.add_term({var}, Rational(1));
    }
    return poly;
}

const Rational& TwoVarPoly::value_at(std::uint32_t alpha, std::uint32_t beta) const {
    if (alpha >= values.size() || beta >= values[alpha].size() || !values[alpha][beta]) {
        throw std::out_of_range("grid value q(" + std::to_string(alpha) + "," +
                                std::to_string(beta) + ") unavailable");
    }
    return *values[alpha][beta];
}

namespace {

/// Newton interpolation on nodes 0..n-1; returns monomial coefficients of
/// the minimal interpolant (trailing zeros trimmed).
std::vector<Rational> interpolate_integer_nodes(const std::vector<Rational>& values) {
    const std::size_t n = values.size();
    // Divided differences in place.
    std::vector<Rational> diff = values;
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = n - 1; i >= level; --i) {
            diff[i] = (diff[i] - diff[i - 1]) / Rational(static_cast<int>(level));
            if (i == level) break;
        }
    }
    // Expand Newton form sum_k diff[k] * prod_{t<k} (x - t).
    std::vector<Rational> coeffs(n, Rational(0));
    std::vector<Rational> basis{Rational(1)}; // prod_{t<k}(x - t)
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            // basis *= (x - (k-1))
            basis.push_back(Rational(0));
            const Rational shift(static_cast<int>(k - 1));
            for (std::size_t t = basis.size() - 1; t > 0; --t) {
                basis[t] = basis[t - 1] - shift * basis[t];
            }
            basis[0] = -shift * basis[0];
        }
        if (diff[k] != 0) {
            for (std::size_t t = 0; t < basis.size(); ++t) coeffs[t] += diff[k] * basis[t];
        }
    }
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    return coeffs;
}

int minimal_interpolant_degree(const std::vector<Rational>& values) {
    const auto coeffs = interpolate_integer_nodes(values);
    return static_cast<int>(coeffs.size()) - 1; // -1 for the zero polynomial
}

std::uint64_t saturating_pow_u64(std::uint64_t base, std::uint32_t exp) {
    constexpr std::uint64_t kSat = ~std::uint64_t{0};
    std::uint64_t out = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && out > kSat / base) return kSat;
        out *= base;
    }
    return out;
}

} // namespace

TwoVarPoly symmetrize_two_var(const EtaPolynomial& poly, const SymmetrizeOptions& options) {
    const std::uint32_t B = poly.block_count();
    if (B == 0) throw std::invalid_argument("symmetrization needs B >= 1");

    TwoVarPoly out;
    out.B = B;
    out.alpha_max = (B + 1) / 2;
    out.beta_max = B / 2;
    out.degenerate = B < 2;

    const bool exhaustive = B <= options.exhaustive_cap;
    if (!exhaustive && !options.enable_sampling) {
        throw BudgetError("exhaustive symmetrization capped at B=" +
                              std::to_string(options.exhaustive_cap) + ", got B=" +
                              std::to_string(B) + " (sampling disabled)",
                          saturating_pow_u64(B, B), saturating_pow_u64(options.exhaustive_cap, options.exhaustive_cap));
    }
    out.approximate = !exhaustive;

    // Per-cell tallies: class size and per-term match counts.
    const std::size_t cells = (out.alpha_max + 1) * (out.beta_max + 1);
    std::vector<std::uint64_t> class_size(cells, 0);
    const std::size_t nterms = poly.terms().size();
    std::vector<std::uint64_t> matches(cells * nterms, 0);

    std::vector<const EtaMonomial*> monomials;
    std::vector<const Rational*> coefficients;
    monomials.reserve(nterms);
    coefficients.reserve(nterms);
    for (const auto& [m, c] : poly.terms()) {
        monomials.push_back(&m);
        coefficients.push_back(&c);
    }

    const auto tally = [&](const std::vector<std::uint32_t>& pi) {
        std::uint32_t alpha = 0, beta = 0;
        for (std::uint32_t i = 0; i < B; ++i) {
            if (pi[i] == 0) ((i % 2 == 0) ? alpha : beta)++;
        }
        const std::size_t cell = alpha * (out.beta_max + 1) + beta;
        ++class_size[cell];
        for (std::size_t t = 0; t < nterms; ++t) {
            bool match = true;
            for (const auto& [i, j] : *monomials[t]) {
                if (pi[i] != j) {
                    match = false;
                    break;
                }
            }
            if (match) ++matches[cell * nterms + t];
        }
    };

    std::vector<std::uint32_t> pi(B, 0);
    if (exhaustive) {
        bool more = true;
        while (more) {
            tally(pi);
            more = false;
            for (std::size_t i = pi.size(); i-- > 0;) {
                if (++pi[i] < B) {
                    more = true;
                    break;
                }
                pi[i] = 0;
            }
        }
    } else {
        std::mt19937_64 rng(options.seed);
        std::uniform_int_distribution<std::uint32_t> dist(0, B - 1);
        for (std::uint64_t s = 0; s < options.samples; ++s) {
            for (auto& v : pi) v = dist(rng);
            tally(pi);
        }
    }

    out.values.assign(out.alpha_max + 1,
                      std::vector<std::optional<Rational>>(out.beta_max + 1, std::nullopt));
    bool grid_complete = true;
    for (std::uint32_t a = 0; a <= out.alpha_max; ++a) {
        for (std::uint32_t b = 0; b <= out.beta_max; ++b) {
            const std::size_t cell = a * (out.beta_max + 1) + b;
            if (class_size[cell] == 0) {
                grid_complete = false;
                continue;
            }
            Rational v(0);
            for (std::size_t t = 0; t < nterms; ++t) {
                if (matches[cell * nterms + t] == 0) continue;
                v += *coefficients[t] *
                     Rational(BigInt(matches[cell * nterms + t]), BigInt(class_size[cell]));
            }
            out.values[a][b] = std::move(v);
        }
    }

    // Coefficients by exact bivariate interpolation, when meaningful.
    if (grid_complete && !out.approximate) {
        // First across beta per alpha row, then across alpha per beta power.
        std::vector<std::vector<Rational>> row_coeffs(out.alpha_max + 1);
        std::size_t max_b_len = 0;
        for (std::uint32_t a = 0; a <= out.alpha_max; ++a) {
            std::vector<Rational> vals;
            vals.reserve(out.beta_max + 1);
            for (std::uint32_t b = 0; b <= out.beta_max; ++b) vals.push_back(*out.values[a][b]);
            row_coeffs[a] = interpolate_integer_nodes(vals);
            max_b_len = std::max(max_b_len, row_coeffs[a].size());
        }
        int degree = -1;
        for (std::size_t bpow = 0; bpow < max_b_len; ++bpow) {
            std::vector<Rational> column;
            column.reserve(out.alpha_max + 1);
            for (std::uint32_t a = 0; a <= out.alpha_max; ++a) {
                column.push_back(bpow < row_coeffs[a].size() ? row_coeffs[a][bpow] : Rational(0));
            }
            const auto acoeffs = interpolate_integer_nodes(column);
            for (std::size_t apow = 0; apow < acoeffs.size(); ++apow) {
                if (acoeffs[apow] == 0) continue;
                out.coefficients[{static_cast<std::uint32_t>(apow),
                                  static_cast<std::uint32_t>(bpow)}] = acoeffs[apow];
                degree = std::max(degree, static_cast<int>(apow + bpow));
            }
        }
        out.degree = std::max(degree, 0);
    }
    return out;
}

OneVarPoly collapse_to_one_var(const TwoVarPoly& q, std::uint32_t B) {
    if (q.B != B) {
        throw std::invalid_argument("block count mismatch in collapse");
    }
    const std::uint32_t m = B / 2;
    OneVarPoly out;

    const Rational half(1, 2);
    const Rational& origin = q.value_at(0, 0); // throws when unavailable (degenerate grid)
    if (origin <= half) {
        out.case_fired = OneVarPoly::Case::BetaLine;
        for (std::uint32_t i = 0; i <= m; ++i) out.values.push_back(q.value_at(0, i));
    } else {
        out.case_fired = OneVarPoly::Case::AlphaLine;
        for (std::uint32_t i = 0; i <= m; ++i) out.values.push_back(q.value_at(i, 0));
    }
    out.degree = minimal_interpolant_degree(out.values);
    return out;
}

std::uint32_t paturi_min_degree(std::uint32_t m, double gap, double tol,
                                const SimplexOptions& simplex_options) {
    if (m < 1) throw std::invalid_argument("grid size m must be >= 1");
    if (!(gap > 0.0) || gap > 1.0) throw std::invalid_argument("gap must lie in (0, 1]");

    // Chebyshev values T_k(2i/m - 1) for the whole grid, extended on demand.
    std::vector<std::vector<double>> cheb; // cheb[k][i]
    const auto extend_cheb = [&](std::uint32_t upto) {
        while (cheb.size() <= upto) {
            const std::size_t k = cheb.size();
            std::vector<double> row(m + 1);
            for (std::uint32_t i = 0; i <= m; ++i) {
                const double u = 2.0 * i / m - 1.0;
                if (k == 0) {
                    row[i] = 1.0;
                } else if (k == 1) {
                    row[i] = u;
                } else {
                    row[i] = 2.0 * u * cheb[k - 1][i] - cheb[k - 2][i];
                }
            }
            cheb.push_back(std::move(row));
        }
    };

    SimplexOptions opts = simplex_options;
    opts.tol = tol;

    for (std::uint32_t T = 0; T <= m; ++T) {
        extend_cheb(T);
        std::vector<DenseRow> rows;
        rows.reserve(2 * (m + 1) + 1);
        for (std::uint32_t i = 0; i <= m; ++i) {
            DenseRow lower, upper;
            lower.coeffs.resize(T + 1);
            for (std::uint32_t k = 0; k <= T; ++k) lower.coeffs[k] = cheb[k][i];
            upper.coeffs = lower.coeffs;
            lower.rel = Relation::GreaterEq;
            lower.rhs = 0.0;
            upper.rel = Relation::LessEq;
            upper.rhs = 1.0;
            rows.push_back(std::move(lower));
            rows.push_back(std::move(upper));
        }
        DenseRow jump;
        jump.coeffs.resize(T + 1);
        for (std::uint32_t k = 0; k <= T; ++k) jump.coeffs[k] = cheb[k][1] - cheb[k][0];
        jump.rel = Relation::GreaterEq;
        jump.rhs = gap;
        rows.push_back(std::move(jump));

        if (solve_phase_one(T + 1, rows, opts).feasible) return T;
    }
    // Degree m always admits an interpolant through bounded values with the
    // required jump, so the scan cannot fall through.
    throw std::logic_error("paturi scan exhausted degrees 0..m without feasibility");
}

PipelineTrace run_block_pipeline(const BlockTemplate& tmpl, const DeltaXiPoly& poly,
                                 const PipelineOptions& options) {
    PipelineTrace trace;
    trace.n = tmpl.n;
    trace.k = tmpl.k;
    trace.B = tmpl.B;
    trace.input_degree = poly.degree();

    const EtaPolynomial eta = eta_reduce(poly, tmpl);
    trace.eta_terms = eta.term_count();
    trace.eta_degree = eta.degree();

    const TwoVarPoly q = symmetrize_two_var(eta, options.symmetrize);
    trace.approximate = q.approximate;
    for (std::uint32_t a = 0; a <= q.alpha_max; ++a) {
        for (std::uint32_t b = 0; b <= q.beta_max; ++b) {
            if (q.values[a][b]) trace.q_values.emplace_back(a, b, *q.values[a][b]);
        }
    }
    trace.q_degree = q.degree;

    if (q.degenerate) {
        // B = 1: the whole domain is exceptional and the reduction yields no
        // lower bound beyond constants.
        trace.degenerate = true;
        return trace;
    }

    const OneVarPoly q_hat = collapse_to_one_var(q, tmpl.B);
    trace.case_fired = q_hat.case_fired;
    trace.q_hat_values = q_hat.values;
    trace.q_hat_degree = q_hat.degree;
    trace.paturi_grid = tmpl.B / 2;

    if (q_hat.values.size() >= 2) {
        Rational gap = q_hat.values[1] - q_hat.values[0];
        if (gap < 0) gap = -gap;
        trace.observed_gap = gap;
        if (options.run_paturi && gap > 0 && trace.paturi_grid >= 1) {
            double g = std::min(1.0, to_double(gap));
            trace.paturi_degree = paturi_min_degree(trace.paturi_grid, g, options.paturi_tol);
        }
    }
    return trace;
}

} // namespace qinterp
