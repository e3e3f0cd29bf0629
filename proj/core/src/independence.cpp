#include <qinterp/independence.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qinterp {

ExceptionSet::ExceptionSet(std::vector<FieldElem> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end(),
              [](const FieldElem& a, const FieldElem& b) { return a.value() < b.value(); });
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i - 1] == points_[i]) {
            throw std::invalid_argument("duplicate point " + std::to_string(points_[i].value()) +
                                        " in exception set");
        }
    }
}

bool ExceptionSet::contains(const FieldElem& x) const noexcept {
    return std::binary_search(points_.begin(), points_.end(), x,
                              [](const FieldElem& a, const FieldElem& b) {
                                  return a.value() < b.value();
                              });
}

DeltaMonomial::DeltaMonomial(std::vector<std::pair<FieldElem, FieldElem>> factors)
    : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end(),
              [](const auto& a, const auto& b) { return a.first.value() < b.first.value(); });
    for (std::size_t i = 1; i < factors_.size(); ++i) {
        if (factors_[i - 1].first == factors_[i].first) {
            throw std::invalid_argument("monomial repeats point " +
                                        std::to_string(factors_[i].first.value()));
        }
    }
    for (const auto& [x, y] : factors_) {
        if (x.modulus() != y.modulus()) {
            throw std::invalid_argument("monomial factor mixes fields");
        }
    }
}

int DeltaMonomial::evaluate(const FunctionTable& f) const {
    for (const auto& [x, y] : factors_) {
        if (!(f.value_at(x) == y)) return 0;
    }
    return 1;
}

std::string DeltaMonomial::describe() const {
    if (factors_.empty()) return "1";
    std::string out;
    for (const auto& [x, y] : factors_) {
        if (!out.empty()) out += "*";
        out += "d[" + std::to_string(x.value()) + "," + std::to_string(y.value()) + "]";
    }
    return out;
}

namespace {

// Conditional tallies for one tuple: conditioning key -> (total, value-tuple counts).
struct ConditionalTally {
    std::uint64_t total = 0;
    std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
};

std::vector<std::pair<std::vector<std::uint32_t>, Rational>> normalize(
    const ConditionalTally& tally) {
    std::vector<std::pair<std::vector<std::uint32_t>, Rational>> out;
    out.reserve(tally.counts.size());
    for (const auto& [value, count] : tally.counts) {
        out.emplace_back(value, Rational(BigInt(count), BigInt(tally.total)));
    }
    return out;
}

bool same_distribution(const ConditionalTally& a, const ConditionalTally& b) {
    if (a.counts.size() != b.counts.size()) return false;
    auto ia = a.counts.begin();
    auto ib = b.counts.begin();
    for (; ia != a.counts.end(); ++ia, ++ib) {
        if (ia->first != ib->first) return false;
        // c_a/n_a == c_b/n_b via cross multiplication, exact
        if (BigInt(ia->second) * BigInt(b.total) != BigInt(ib->second) * BigInt(a.total)) {
            return false;
        }
    }
    return true;
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint32_t exp) {
    constexpr std::uint64_t kSat = ~std::uint64_t{0};
    std::uint64_t out = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && out > kSat / base) return kSat;
        out *= base;
    }
    return out;
}

bool advance_odometer(std::vector<std::size_t>& digits, std::size_t base) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < base) return true;
        digits[i] = 0;
    }
    return false;
}

std::vector<std::vector<std::uint32_t>> member_value_rows(const Family& family) {
    std::vector<std::vector<std::uint32_t>> rows(family.size());
    for (std::size_t m = 0; m < family.size(); ++m) {
        const auto& vals = family.member(m).values();
        rows[m].reserve(vals.size());
        for (const auto& v : vals) rows[m].push_back(v.value());
    }
    return rows;
}

} // namespace

IndependenceReport check_independence(const Family& family, const PropertySpec& spec,
                                      std::uint32_t d, const ExceptionSet& exceptions,
                                      const IndependenceOptions& options) {
    if (family.size() == 0) throw std::invalid_argument("empty family");
    const auto& domain = family.descriptor().domain;
    for (const auto& s : exceptions.points()) {
        bool in_domain = false;
        for (const auto& x : domain) in_domain = in_domain || x == s;
        if (!in_domain) {
            throw std::invalid_argument("exception point " + std::to_string(s.value()) +
                                        " outside the family domain");
        }
    }

    const std::vector<std::uint8_t> bits = classify_family(spec, family);
    if (std::find(bits.begin(), bits.end(), 0) == bits.end() ||
        std::find(bits.begin(), bits.end(), 1) == bits.end()) {
        throw std::invalid_argument("property is trivial on the family (" + spec.describe() + ")");
    }

    const std::uint64_t tuple_count = saturating_pow(domain.size(), d);
    if (tuple_count > options.tuple_budget) {
        throw BudgetError("independence check requires " + std::to_string(tuple_count) +
                              " tuples, budget is " + std::to_string(options.tuple_budget),
                          tuple_count, options.tuple_budget);
    }

    const std::vector<std::vector<std::uint32_t>> rows = member_value_rows(family);

    IndependenceReport report;
    report.holds = true;
    if (d == 0) {
        // The empty tuple carries no values; independence is vacuous.
        report.budget_checked = 1;
        return report;
    }

    std::vector<std::size_t> tuple_idx(d, 0);
    std::vector<std::size_t> order;
    std::vector<std::uint32_t> key, value;
    order.reserve(d);
    key.reserve(d + 1);
    value.reserve(d);

    bool more = true;
    while (more) {
        bool skip = false;
        if (options.distinct_tuples) {
            for (std::size_t i = 0; i < d && !skip; ++i) {
                for (std::size_t j = i + 1; j < d; ++j) {
                    if (tuple_idx[i] == tuple_idx[j]) {
                        skip = true;
                        break;
                    }
                }
            }
        }
        if (!skip) {
            ++report.budget_checked;

            // Stable reorder: exception entries first (r of them).
            order.clear();
            std::size_t r = 0;
            for (std::size_t i = 0; i < d; ++i) {
                if (exceptions.contains(domain[tuple_idx[i]])) {
                    order.insert(order.begin() + static_cast<std::ptrdiff_t>(r), i);
                    ++r;
                } else {
                    order.push_back(i);
                }
            }

            std::map<std::vector<std::uint32_t>, ConditionalTally> groups;
            for (std::size_t m = 0; m < rows.size(); ++m) {
                key.clear();
                for (std::size_t i = 0; i < r; ++i) key.push_back(rows[m][tuple_idx[order[i]]]);
                key.push_back(bits[m]);
                value.clear();
                for (std::size_t i = r; i < d; ++i) value.push_back(rows[m][tuple_idx[order[i]]]);
                auto& tally = groups[key];
                ++tally.total;
                ++tally.counts[value];
            }

            const auto first = groups.begin();
            for (auto it = std::next(first); it != groups.end(); ++it) {
                if (!same_distribution(first->second, it->second)) {
                    IndependenceWitness witness;
                    witness.exception_count = r;
                    for (std::size_t i = 0; i < d; ++i) {
                        witness.tuple.push_back(domain[tuple_idx[order[i]]]);
                    }
                    witness.conditioning_a = first->first;
                    witness.conditioning_b = it->first;
                    witness.distribution_a = normalize(first->second);
                    witness.distribution_b = normalize(it->second);
                    report.holds = false;
                    report.witness = std::move(witness);
                    return report;
                }
            }
        }
        more = advance_odometer(tuple_idx, domain.size());
    }
    return report;
}

namespace {

Rational gap_from_counts(std::uint64_t c0, std::uint64_t n0, std::uint64_t c1, std::uint64_t n1) {
    return Rational(BigInt(c1), BigInt(n1)) - Rational(BigInt(c0), BigInt(n0));
}

} // namespace

Rational monomial_gap(const Family& family, const PropertySpec& spec, const DeltaMonomial& m) {
    const auto& domain = family.descriptor().domain;
    std::vector<std::pair<std::size_t, std::uint32_t>> tests; // (domain position, expected value)
    tests.reserve(m.degree());
    for (const auto& [x, y] : m.factors()) {
        std::size_t pos = domain.size();
        for (std::size_t i = 0; i < domain.size(); ++i) {
            if (domain[i] == x) {
                pos = i;
                break;
            }
        }
        if (pos == domain.size()) {
            throw std::invalid_argument("monomial point " + std::to_string(x.value()) +
                                        " outside the family domain");
        }
        tests.emplace_back(pos, y.value());
    }

    const std::vector<std::uint8_t> bits = classify_family(spec, family);
    const std::vector<std::vector<std::uint32_t>> rows = member_value_rows(family);
    std::uint64_t n0 = 0, n1 = 0, c0 = 0, c1 = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool match = true;
        for (const auto& [pos, y] : tests) {
            if (rows[i][pos] != y) {
                match = false;
                break;
            }
        }
        if (bits[i]) {
            ++n1;
            c1 += match ? 1 : 0;
        } else {
            ++n0;
            c0 += match ? 1 : 0;
        }
    }
    if (n0 == 0 || n1 == 0) {
        throw std::invalid_argument("property is trivial on the family (" + spec.describe() + ")");
    }
    return gap_from_counts(c0, n0, c1, n1);
}

std::uint64_t count_monomials_up_to_degree(std::size_t domain_size, std::size_t range_size,
                                           std::uint32_t T) {
    constexpr std::uint64_t kSat = ~std::uint64_t{0};
    std::uint64_t total = 0;
    for (std::uint32_t t = 0; t <= T && t <= domain_size; ++t) {
        std::uint64_t term = 1; // C(|D|, t) * |R|^t
        bool saturated = false;
        for (std::uint32_t i = 0; i < t; ++i) {
            const std::uint64_t num = domain_size - i;
            if (term > kSat / num) {
                saturated = true;
                break;
            }
            term = term * num / (i + 1);
            if (range_size != 0 && term > kSat / range_size) {
                saturated = true;
                break;
            }
            term *= range_size;
        }
        if (saturated || total > kSat - term) return kSat;
        total += term;
    }
    return total;
}

void for_each_delta_monomial(const std::vector<FieldElem>& domain,
                             const std::vector<FieldElem>& range, std::uint32_t T,
                             const std::function<void(const DeltaMonomial&)>& fn) {
    fn(DeltaMonomial{});
    const std::size_t nd = domain.size();

    for (std::uint32_t t = 1; t <= T && t <= nd; ++t) {
        std::vector<std::size_t> combo(t);
        for (std::size_t i = 0; i < t; ++i) combo[i] = i;

        bool more_combos = true;
        while (more_combos) {
            std::vector<std::size_t> yidx(t, 0);
            bool more_y = true;
            while (more_y) {
                std::vector<std::pair<FieldElem, FieldElem>> factors;
                factors.reserve(t);
                for (std::size_t i = 0; i < t; ++i) {
                    factors.emplace_back(domain[combo[i]], range[yidx[i]]);
                }
                fn(DeltaMonomial(std::move(factors)));
                more_y = advance_odometer(yidx, range.size());
            }

            more_combos = false;
            for (std::size_t i = t; i-- > 0;) {
                if (combo[i] < nd - t + i) {
                    ++combo[i];
                    for (std::size_t j = i + 1; j < t; ++j) combo[j] = combo[j - 1] + 1;
                    more_combos = true;
                    break;
                }
            }
        }
    }
}

MaxGapResult max_gap_up_to_degree(const Family& family, const PropertySpec& spec, std::uint32_t T,
                                  const GapOptions& options) {
    const auto& domain = family.descriptor().domain;
    const auto range = all_residues(family.descriptor().p);

    const std::uint64_t required = count_monomials_up_to_degree(domain.size(), range.size(), T);
    if (required > options.monomial_budget) {
        throw BudgetError("degree-" + std::to_string(T) + " scan requires " +
                              std::to_string(required) + " monomials, budget is " +
                              std::to_string(options.monomial_budget),
                          required, options.monomial_budget);
    }

    const std::vector<std::uint8_t> bits = classify_family(spec, family);
    std::uint64_t n0 = 0, n1 = 0;
    for (const auto b : bits) (b ? n1 : n0)++;
    if (n0 == 0 || n1 == 0) {
        throw std::invalid_argument("property is trivial on the family (" + spec.describe() + ")");
    }

    const std::vector<std::vector<std::uint32_t>> rows = member_value_rows(family);
    std::vector<std::size_t> position_of_value(family.descriptor().p, domain.size());
    for (std::size_t i = 0; i < domain.size(); ++i) position_of_value[domain[i].value()] = i;

    MaxGapResult result;
    result.max_abs_gap = Rational(0);
    result.attaining = DeltaMonomial{};

    std::vector<std::pair<std::size_t, std::uint32_t>> tests;
    for_each_delta_monomial(domain, range, T, [&](const DeltaMonomial& m) {
        ++result.monomials_checked;
        tests.clear();
        for (const auto& [x, y] : m.factors()) {
            tests.emplace_back(position_of_value[x.value()], y.value());
        }
        std::uint64_t c0 = 0, c1 = 0;
        for (std::size_t mem = 0; mem < rows.size(); ++mem) {
            bool match = true;
            for (const auto& [pos, y] : tests) {
                if (rows[mem][pos] != y) {
                    match = false;
                    break;
                }
            }
            if (match) (bits[mem] ? c1 : c0)++;
        }
        Rational gap = gap_from_counts(c0, n0, c1, n1);
        if (gap < 0) gap = -gap;
        if (gap > result.max_abs_gap) {
            result.max_abs_gap = gap;
            result.attaining = m;
        }
    });
    return result;
}

} // namespace qinterp
