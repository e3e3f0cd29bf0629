#pragma once

#include <qinterp/rational.hpp>
#include <qinterp/simplex.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace qinterp {

/// Shared data of a block-permuted input family: n points laid out in B
/// blocks of k (the first k points are the exception points), response
/// values on the exception points for the two reference functions, and the
/// permutation slot left free.  Positions are 1-based in the API; position i
/// lives at index i-1 in the stored sequences.
struct BlockTemplate {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t B = 0;                 // floor(n / k)
    std::vector<std::uint32_t> z_order;  // z_1..z_n, distinct labels; z_1..z_k exceptional
    std::vector<std::uint32_t> g_values; // g(z_1)..g(z_k)
    std::vector<std::uint32_t> h_values; // h(z_1)..h(z_k)

    /// Response value at a block position (independent of the permutation):
    /// g on even blocks, h on odd.  Tail positions return 0; they never feed
    /// the eta reduction because their points lie outside the exception set.
    std::uint32_t response_at(std::uint32_t position) const;
};

BlockTemplate make_block_template(std::uint32_t n, std::uint32_t k,
                                  std::vector<std::uint32_t> g_values,
                                  std::vector<std::uint32_t> h_values,
                                  std::vector<std::uint32_t> z_order);

/// A fully arranged instance: X(i + kj) = z_{i + k*pi(j)} on block
/// positions, X(i) = z_i on the tail, and alternating g/h responses.
struct BlockInstance {
    BlockTemplate tmpl;
    std::vector<std::uint32_t> pi; // {0..B-1} -> {0..B-1}
    std::vector<std::uint32_t> X;  // arrangement, position i at index i-1
    std::vector<std::uint32_t> Y;  // responses, position i at index i-1
};

BlockInstance build_block_instance(std::uint32_t n, std::uint32_t k,
                                   const std::vector<std::uint32_t>& pi,
                                   std::vector<std::uint32_t> g_values,
                                   std::vector<std::uint32_t> h_values,
                                   std::vector<std::uint32_t> z_order);

BlockInstance build_block_instance(const BlockTemplate& tmpl,
                                   const std::vector<std::uint32_t>& pi);

/// One indicator variable of the random-input analysis:
///   - response engaged: [X(i) = point and Y(i) = response], point exceptional;
///   - response empty:   [X(i) = point], point outside the exception set.
struct DeltaXiVar {
    std::uint32_t position = 0; // 1-based index i
    std::uint32_t point = 0;    // x
    std::optional<std::uint32_t> response; // y (engaged = delta variable)

    friend auto operator<=>(const DeltaXiVar&, const DeltaXiVar&) = default;
};

using DeltaXiMonomial = std::vector<DeltaXiVar>; // sorted by position, distinct positions

/// Polynomial over the delta/xi indicators with exact rational coefficients.
class DeltaXiPoly {
public:
    void add_term(DeltaXiMonomial monomial, const Rational& coefficient);
    const std::map<DeltaXiMonomial, Rational>& terms() const noexcept { return terms_; }
    std::size_t degree() const noexcept;
    bool empty() const noexcept { return terms_.empty(); }

private:
    std::map<DeltaXiMonomial, Rational> terms_;
};

using EtaMonomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>; // (i, j), distinct i

/// Polynomial in the permutation indicators [pi(i) = j].
class EtaPolynomial {
public:
    explicit EtaPolynomial(std::uint32_t B, std::size_t degree_cap = 0)
        : B_(B), degree_cap_(degree_cap) {}

    std::uint32_t block_count() const noexcept { return B_; }
    std::size_t degree_cap() const noexcept { return degree_cap_; }
    const std::map<EtaMonomial, Rational>& terms() const noexcept { return terms_; }
    std::size_t degree() const noexcept;
    std::size_t term_count() const noexcept { return terms_.size(); }

    void add_term(EtaMonomial monomial, const Rational& coefficient);

    /// Value at a concrete function pi.
    Rational evaluate(const std::vector<std::uint32_t>& pi) const;

private:
    std::uint32_t B_;
    std::size_t degree_cap_;
    std::map<EtaMonomial, Rational> terms_;
};

/// Rewrites every delta/xi variable as 0, 1, or a permutation indicator
/// eta_{j,j'} using the block structure, exactly.  Linear in the input.
EtaPolynomial eta_reduce(const DeltaXiPoly& poly, const BlockTemplate& tmpl);

/// Canonical bounded stand-in for an algorithm polynomial: returns the block
/// parity of the position holding the first exception point's preimage
/// (1 on permutations sending an odd block to the exception points, 0 on
/// even ones).
DeltaXiPoly block_parity_standin(const BlockTemplate& tmpl);

struct SymmetrizeOptions {
    std::uint32_t exhaustive_cap = 8; // largest B enumerated exhaustively (B^B functions)
    bool enable_sampling = false;     // sampled verification for larger B
    std::uint64_t samples = 200'000;
    std::uint64_t seed = 0;
};

/// The symmetrized two-variable polynomial q(alpha, beta): alpha counts even
/// blocks mapped to 0, beta odd blocks.  Values are exact orbit averages
/// over all functions pi grouped by (alpha, beta); coefficients are
/// recovered by exact interpolation when the grid is complete.
struct TwoVarPoly {
    std::uint32_t B = 0;
    std::uint32_t alpha_max = 0; // ceil(B/2)
    std::uint32_t beta_max = 0;  // floor(B/2)
    std::vector<std::vector<std::optional<Rational>>> values; // [alpha][beta], nullopt unachievable
    std::map<std::pair<std::uint32_t, std::uint32_t>, Rational> coefficients;
    int degree = 0;
    bool degenerate = false;  // B < 2: only (1,0) achievable
    bool approximate = false; // sampled, not exhaustive

    const Rational& value_at(std::uint32_t alpha, std::uint32_t beta) const;
};

TwoVarPoly symmetrize_two_var(const EtaPolynomial& poly, const SymmetrizeOptions& options = {});

/// Restriction of q to one variable on {0..floor(B/2)}.  Case selection per
/// the midpoint value: when q(0,0) <= 1/2 the beta line q(0, .) carries the
/// jump, otherwise the alpha line q(., 0).
struct OneVarPoly {
    enum class Case { BetaLine, AlphaLine };
    std::vector<Rational> values; // q_hat(0..m)
    int degree = 0;               // degree of the minimal interpolant
    Case case_fired = Case::BetaLine;
};

OneVarPoly collapse_to_one_var(const TwoVarPoly& q, std::uint32_t B);

/// Smallest degree T admitting a polynomial q with 0 <= q(i) <= 1 on
/// {0..m} and q(1) - q(0) >= gap, decided by LP feasibility over a
/// Chebyshev coefficient vector, scanning T upward.
std::uint32_t paturi_min_degree(std::uint32_t m, double gap, double tol = 1e-7,
                                const SimplexOptions& simplex_options = {});

/// Full reduction trace of one pipeline run.
struct PipelineTrace {
    std::uint32_t n = 0, k = 0, B = 0;
    std::size_t input_degree = 0;
    std::size_t eta_terms = 0;
    std::size_t eta_degree = 0;
    std::vector<std::tuple<std::uint32_t, std::uint32_t, Rational>> q_values; // (alpha, beta, value)
    int q_degree = 0;
    bool degenerate = false;
    bool approximate = false;
    std::optional<OneVarPoly::Case> case_fired;
    std::vector<Rational> q_hat_values;
    int q_hat_degree = 0;
    Rational observed_gap;             // |q_hat(0) - q_hat(1)|
    std::uint32_t paturi_grid = 0;     // m
    std::optional<std::uint32_t> paturi_degree;
};

struct PipelineOptions {
    SymmetrizeOptions symmetrize;
    double paturi_tol = 1e-7;
    bool run_paturi = true;
};

PipelineTrace run_block_pipeline(const BlockTemplate& tmpl, const DeltaXiPoly& poly,
                                 const PipelineOptions& options = {});

} // namespace qinterp
