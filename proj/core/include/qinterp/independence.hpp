#pragma once

#include <qinterp/finite_field.hpp>
#include <qinterp/property.hpp>
#include <qinterp/rational.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qinterp {

/// The exception set S: a subset of the domain at which function values are
/// allowed to leak information about the property.
class ExceptionSet {
public:
    ExceptionSet() = default;
    explicit ExceptionSet(std::vector<FieldElem> points);

    const std::vector<FieldElem>& points() const noexcept { return points_; }
    bool empty() const noexcept { return points_.empty(); }
    std::size_t size() const noexcept { return points_.size(); }
    bool contains(const FieldElem& x) const noexcept;

private:
    std::vector<FieldElem> points_; // sorted by value, distinct
};

/// Product of indicator factors [f(x) = y] with pairwise-distinct x; the
/// degree is the factor count.  Repeated x with equal y would be redundant
/// (the indicator is idempotent) and with different y identically zero, so
/// both are rejected at construction.
class DeltaMonomial {
public:
    DeltaMonomial() = default;
    explicit DeltaMonomial(std::vector<std::pair<FieldElem, FieldElem>> factors);

    const std::vector<std::pair<FieldElem, FieldElem>>& factors() const noexcept {
        return factors_;
    }
    std::size_t degree() const noexcept { return factors_.size(); }

    /// 1 when f matches every factor, 0 otherwise.
    int evaluate(const FunctionTable& f) const;

    std::string describe() const;

private:
    std::vector<std::pair<FieldElem, FieldElem>> factors_; // sorted by x value
};

struct IndependenceOptions {
    bool distinct_tuples = false;         // restrict to tuples with distinct entries
    std::uint64_t tuple_budget = 1'000'000;
};

/// Counterexample to an independence check: the tuple, the two conditioning
/// assignments (r leading values plus the property bit), and their exact
/// conditional distributions over the trailing (d-r)-tuple of values.
struct IndependenceWitness {
    std::vector<FieldElem> tuple;            // z_1..z_d, exception points first
    std::size_t exception_count = 0;         // r
    std::vector<std::uint32_t> conditioning_a; // f(z_1)..f(z_r), P(f)
    std::vector<std::uint32_t> conditioning_b;
    std::vector<std::pair<std::vector<std::uint32_t>, Rational>> distribution_a;
    std::vector<std::pair<std::vector<std::uint32_t>, Rational>> distribution_b;
};

struct IndependenceReport {
    bool holds = false;
    std::uint64_t budget_checked = 0; // number of z-tuples examined
    std::optional<IndependenceWitness> witness;
};

/// Exhaustive check of (d,S)-independence of the property on the family,
/// under the uniform distribution on members.  For every tuple in D^d
/// (exception points listed first) the conditional distribution of the
/// trailing values given the leading values and the property bit must be
/// identical, as exact rationals, across all conditionings of nonzero
/// probability.
IndependenceReport check_independence(const Family& family, const PropertySpec& spec,
                                      std::uint32_t d, const ExceptionSet& exceptions,
                                      const IndependenceOptions& options = {});

/// E[m | P=1] - E[m | P=0] over the uniform family member, exact.
/// Throws std::invalid_argument when the property is trivial on the family
/// or a monomial point lies outside the family domain.
Rational monomial_gap(const Family& family, const PropertySpec& spec, const DeltaMonomial& m);

struct GapOptions {
    std::uint64_t monomial_budget = 200'000;
};

struct MaxGapResult {
    Rational max_abs_gap;
    DeltaMonomial attaining; // first monomial attaining the max, in basis order
    std::uint64_t monomials_checked = 0;
};

/// Maximum |monomial_gap| over all monomials of degree <= T with points
/// drawn from the family domain and values from GF(p).  Deterministic
/// tie-break: the first attaining monomial in enumeration order (by degree,
/// then lexicographic on (domain position, value)).
MaxGapResult max_gap_up_to_degree(const Family& family, const PropertySpec& spec, std::uint32_t T,
                                  const GapOptions& options = {});

/// Number of delta monomials of degree <= T over |D| points and |R| values:
/// sum over t of C(|D|,t) * |R|^t, saturating at uint64 max.
std::uint64_t count_monomials_up_to_degree(std::size_t domain_size, std::size_t range_size,
                                           std::uint32_t T);

/// Enumerates monomials of degree <= T in the deterministic basis order,
/// invoking fn on each.  Shared by the gap engine and the LP basis.
void for_each_delta_monomial(const std::vector<FieldElem>& domain,
                             const std::vector<FieldElem>& range, std::uint32_t T,
                             const std::function<void(const DeltaMonomial&)>& fn);

} // namespace qinterp
