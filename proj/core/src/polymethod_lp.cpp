#include <qinterp/polymethod_lp.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qinterp {

MonomialBasis::MonomialBasis(std::vector<FieldElem> domain, std::vector<FieldElem> range,
                             std::uint32_t T, std::vector<DeltaMonomial> monomials)
    : domain_(std::move(domain)), range_(std::move(range)), T_(T),
      monomials_(std::move(monomials)) {
    if (monomials_.empty() || monomials_.front().degree() != 0) {
        throw std::invalid_argument("monomial basis must start with the empty monomial");
    }
}

std::vector<std::uint8_t> MonomialBasis::evaluate_row(
    const std::vector<std::uint32_t>& values_by_pos) const {
    std::vector<std::size_t> position_of_value;
    std::uint32_t p = domain_.front().modulus();
    position_of_value.assign(p, domain_.size());
    for (std::size_t i = 0; i < domain_.size(); ++i) position_of_value[domain_[i].value()] = i;

    std::vector<std::uint8_t> row;
    row.reserve(monomials_.size());
    for (const auto& m : monomials_) {
        std::uint8_t v = 1;
        for (const auto& [x, y] : m.factors()) {
            if (values_by_pos[position_of_value[x.value()]] != y.value()) {
                v = 0;
                break;
            }
        }
        row.push_back(v);
    }
    return row;
}

MonomialBasis enumerate_basis(const std::vector<FieldElem>& domain,
                              const std::vector<FieldElem>& range, std::uint32_t T,
                              std::uint64_t budget) {
    if (domain.empty() || range.empty()) {
        throw std::invalid_argument("basis needs a nonempty domain and range");
    }
    const std::uint64_t required = count_monomials_up_to_degree(domain.size(), range.size(), T);
    if (required > budget) {
        throw BudgetError("basis of degree " + std::to_string(T) + " requires " +
                              std::to_string(required) + " monomials, budget is " +
                              std::to_string(budget),
                          required, budget);
    }
    std::vector<DeltaMonomial> monomials;
    monomials.reserve(required);
    for_each_delta_monomial(domain, range, T,
                            [&](const DeltaMonomial& m) { monomials.push_back(m); });
    return MonomialBasis(domain, range, T, std::move(monomials));
}

LpInstance build_feasibility_lp(const Family& family, const PropertySpec& spec, std::uint32_t T,
                                double eps, const LpBudgets& budgets) {
    if (!(eps > 0.0) || eps > 0.5) {
        throw std::invalid_argument("bias must lie in (0, 1/2]");
    }
    const auto& domain = family.descriptor().domain;
    const auto range = all_residues(family.descriptor().p);

    // |R|^|D| total functions, two box rows each.
    std::uint64_t nfuncs = 1;
    constexpr std::uint64_t kSat = ~std::uint64_t{0};
    for (std::size_t i = 0; i < domain.size(); ++i) {
        nfuncs = (nfuncs > kSat / range.size()) ? kSat : nfuncs * range.size();
    }
    if (nfuncs > budgets.box_budget) {
        throw BudgetError("feasibility system needs " + std::to_string(nfuncs) +
                              " box functions, budget is " + std::to_string(budgets.box_budget),
                          nfuncs, budgets.box_budget);
    }

    const std::vector<std::uint8_t> bits = classify_family(spec, family);
    if (std::find(bits.begin(), bits.end(), 0) == bits.end() ||
        std::find(bits.begin(), bits.end(), 1) == bits.end()) {
        throw std::invalid_argument("property is trivial on the family (" + spec.describe() + ")");
    }

    MonomialBasis basis = enumerate_basis(domain, range, T, budgets.basis_budget);

    LpInstance instance{std::move(basis), {}, 0, eps, rationalize(eps)};
    instance.rows.reserve(2 * nfuncs + family.size());

    // Box rows: 0 <= p(g) <= 1 for every total function g: D -> R.
    std::vector<std::uint32_t> values(domain.size(), 0);
    bool more = true;
    while (more) {
        std::vector<std::uint32_t> values_as_field(domain.size());
        for (std::size_t i = 0; i < domain.size(); ++i) {
            values_as_field[i] = range[values[i]].value();
        }
        auto row = instance.basis.evaluate_row(values_as_field);
        instance.rows.push_back(LpRow{row, Relation::GreaterEq, 0.0, Rational(0)});
        instance.rows.push_back(LpRow{std::move(row), Relation::LessEq, 1.0, Rational(1)});

        more = false;
        for (std::size_t i = values.size(); i-- > 0;) {
            if (++values[i] < range.size()) {
                more = true;
                break;
            }
            values[i] = 0;
        }
    }
    instance.box_row_count = instance.rows.size();

    // Separation rows: p(f) <= 1/2 - eps on class 0, p(f) >= 1/2 + eps on class 1.
    const Rational half(1, 2);
    for (std::size_t midx = 0; midx < family.size(); ++midx) {
        const auto& vals = family.member(midx).values();
        std::vector<std::uint32_t> values_by_pos(vals.size());
        for (std::size_t i = 0; i < vals.size(); ++i) values_by_pos[i] = vals[i].value();
        auto row = instance.basis.evaluate_row(values_by_pos);
        if (bits[midx]) {
            Rational bound = instance.bias_exact ? half + *instance.bias_exact : Rational(0);
            instance.rows.push_back(LpRow{std::move(row), Relation::GreaterEq, 0.5 + eps, bound});
        } else {
            Rational bound = instance.bias_exact ? half - *instance.bias_exact : Rational(0);
            instance.rows.push_back(LpRow{std::move(row), Relation::LessEq, 0.5 - eps, bound});
        }
    }
    return instance;
}

namespace {

double witness_violation(const LpInstance& instance, const std::vector<double>& witness) {
    double worst = 0.0;
    for (const auto& row : instance.rows) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
            if (row.coeffs[j]) lhs += witness[j];
        }
        const double resid =
            row.rel == Relation::LessEq ? lhs - row.bound : row.bound - lhs;
        worst = std::max(worst, resid);
    }
    return worst;
}

bool exact_witness_check(const LpInstance& instance, const std::vector<Rational>& witness) {
    if (!instance.bias_exact) return false;
    for (const auto& row : instance.rows) {
        Rational lhs(0);
        for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
            if (row.coeffs[j]) lhs += witness[j];
        }
        if (row.rel == Relation::LessEq ? lhs > row.bound_exact : lhs < row.bound_exact) {
            return false;
        }
    }
    return true;
}

} // namespace

LpVerdict lp_feasible(const LpInstance& instance, double tol, const SimplexOptions& simplex_options) {
    SimplexOptions opts = simplex_options;
    opts.tol = tol;

    std::vector<DenseRow> rows;
    rows.reserve(instance.rows.size());
    for (const auto& row : instance.rows) {
        DenseRow dr;
        dr.coeffs.assign(row.coeffs.begin(), row.coeffs.end());
        dr.rel = row.rel;
        dr.rhs = row.bound;
        rows.push_back(std::move(dr));
    }

    const PhaseOneResult phase_one = solve_phase_one(instance.basis.size(), rows, opts);

    LpVerdict verdict;
    verdict.iterations = phase_one.iterations;
    verdict.phase_one_objective = phase_one.objective;
    if (!phase_one.feasible) {
        verdict.status = LpVerdict::Status::Infeasible;
        return verdict;
    }

    verdict.status = LpVerdict::Status::Feasible;
    verdict.witness = phase_one.solution;
    verdict.max_violation = witness_violation(instance, phase_one.solution);
    if (verdict.max_violation > tol) {
        throw LpStallError("simplex reported feasible but the witness violates a row by " +
                               std::to_string(verdict.max_violation),
                           phase_one.iterations);
    }

    // Upgrade to an exact witness when every coefficient rationalizes and the
    // rationalized vector satisfies all rows exactly.
    std::vector<Rational> exact;
    exact.reserve(phase_one.solution.size());
    bool ok = instance.bias_exact.has_value();
    for (const double c : phase_one.solution) {
        if (!ok) break;
        const auto r = rationalize(c, 1'000'000, 1e-6);
        if (!r) {
            ok = false;
            break;
        }
        exact.push_back(*r);
    }
    if (ok && exact_witness_check(instance, exact)) {
        verdict.exact_witness = std::move(exact);
    }
    return verdict;
}

MinDegreeResult min_separating_degree(const Family& family, const PropertySpec& spec, double eps,
                                      std::uint32_t T_max, const LpBudgets& budgets, double tol) {
    MinDegreeResult result;
    for (std::uint32_t T = 0; T <= T_max; ++T) {
        LpInstance instance = build_feasibility_lp(family, spec, T, eps, budgets);
        LpVerdict verdict = lp_feasible(instance, tol);
        const bool feasible = verdict.status == LpVerdict::Status::Feasible;
        result.scan.emplace_back(T, feasible);
        if (feasible) {
            result.degree = T;
            result.verdict = std::move(verdict);
            break;
        }
    }
    return result;
}

std::uint32_t query_lower_bound_from_degree(std::uint32_t deg) { return (deg + 1) / 2; }

void write_lp_text(const LpInstance& instance, std::ostream& os) {
    os << "# rows=" << instance.rows.size() << " cols=" << instance.basis.size()
       << " box_rows=" << instance.box_row_count << " bias=" << instance.bias << "\n";
    for (const auto& row : instance.rows) {
        for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
            if (j) os << ' ';
            os << static_cast<int>(row.coeffs[j]);
        }
        os << (row.rel == Relation::LessEq ? " <= " : " >= ") << row.bound << "\n";
    }
}

} // namespace qinterp
