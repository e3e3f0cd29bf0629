#pragma once

#include <qinterp/independence.hpp>
#include <qinterp/rational.hpp>
#include <qinterp/simplex.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace qinterp {

/// Ordered multilinear monomial basis of degree <= T over indicator
/// variables [f(x)=y], x from the domain, y from the range.  Order: by
/// degree, then lexicographically on the (domain position, value) factor
/// sequences.  The empty monomial is always first.
class MonomialBasis {
public:
    MonomialBasis(std::vector<FieldElem> domain, std::vector<FieldElem> range, std::uint32_t T,
                  std::vector<DeltaMonomial> monomials);

    const std::vector<DeltaMonomial>& monomials() const noexcept { return monomials_; }
    std::size_t size() const noexcept { return monomials_.size(); }
    std::uint32_t degree_cap() const noexcept { return T_; }
    const std::vector<FieldElem>& domain() const noexcept { return domain_; }
    const std::vector<FieldElem>& range() const noexcept { return range_; }

    /// Row of 0/1 monomial evaluations at a total function given by its
    /// value per domain position.
    std::vector<std::uint8_t> evaluate_row(const std::vector<std::uint32_t>& values_by_pos) const;

private:
    std::vector<FieldElem> domain_;
    std::vector<FieldElem> range_;
    std::uint32_t T_;
    std::vector<DeltaMonomial> monomials_;
};

/// Enumerates the basis; throws BudgetError when the monomial count exceeds
/// the budget (default 2*10^5).
MonomialBasis enumerate_basis(const std::vector<FieldElem>& domain,
                              const std::vector<FieldElem>& range, std::uint32_t T,
                              std::uint64_t budget = 200'000);

struct LpRow {
    std::vector<std::uint8_t> coeffs; // monomial evaluations, one per basis element
    Relation rel = Relation::LessEq;
    double bound = 0.0;
    Rational bound_exact;             // same bound as an exact rational
};

/// The feasibility system for "a degree <= T polynomial separates the
/// property classes with bias eps": box rows 0 <= p(g) <= 1 for every total
/// function g, then one bias row per family member.
struct LpInstance {
    MonomialBasis basis;
    std::vector<LpRow> rows;
    std::size_t box_row_count = 0; // leading rows; the rest are separation rows
    double bias = 0.0;
    std::optional<Rational> bias_exact;
};

struct LpBudgets {
    std::uint64_t box_budget = 100'000;   // cap on |R|^|D|
    std::uint64_t basis_budget = 200'000; // cap on basis size
};

LpInstance build_feasibility_lp(const Family& family, const PropertySpec& spec, std::uint32_t T,
                                double eps, const LpBudgets& budgets = {});

struct LpVerdict {
    enum class Status { Feasible, Infeasible };
    Status status = Status::Infeasible;
    std::optional<std::vector<double>> witness;       // basis coefficients when feasible
    double max_violation = 0.0;                       // residual of the witness over all rows
    std::optional<std::vector<Rational>> exact_witness; // present when an exact re-check passed
    std::uint64_t iterations = 0;
    double phase_one_objective = 0.0;
};

/// Decides feasibility with the deterministic phase-one simplex.  Feasible
/// verdicts carry a witness re-validated by substitution into every row; a
/// numerical stall raises LpStallError and is never reported as infeasible.
LpVerdict lp_feasible(const LpInstance& instance, double tol = 1e-7,
                      const SimplexOptions& simplex_options = {});

struct MinDegreeResult {
    std::optional<std::uint32_t> degree;
    std::vector<std::pair<std::uint32_t, bool>> scan; // (T, feasible)
    std::optional<LpVerdict> verdict;                 // verdict at the found degree
};

/// Smallest T <= T_max whose feasibility LP admits a separating polynomial,
/// scanning upward from 0; nullopt when none exists within the cap.
MinDegreeResult min_separating_degree(const Family& family, const PropertySpec& spec, double eps,
                                      std::uint32_t T_max, const LpBudgets& budgets = {},
                                      double tol = 1e-7);

/// ceil(deg / 2): the minimum query count T with 2T >= deg.
std::uint32_t query_lower_bound_from_degree(std::uint32_t deg);

/// Plain-text inspection dump: one row per line (coefficients, relation,
/// bound), preceded by a size comment.
void write_lp_text(const LpInstance& instance, std::ostream& os);

} // namespace qinterp
