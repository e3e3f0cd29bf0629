#include <qinterp/finite_field.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace qinterp {

bool is_prime_modulus(std::uint64_t p) {
    if (p < 2) return false;
    if (p % 2 == 0) return p == 2;
    for (std::uint64_t q = 3; q * q <= p; q += 2) {
        if (p % q == 0) return false;
    }
    return true;
}

namespace {

void require_prime(std::uint32_t p) {
    // Elements are constructed in bulk during enumeration; memoize the last
    // validated modulus so trial division runs once per field, not per value.
    thread_local std::uint32_t last_ok = 0;
    if (p == last_ok) return;
    if (p > kMaxModulus) {
        throw std::invalid_argument("field modulus " + std::to_string(p) + " exceeds the cap " +
                                    std::to_string(kMaxModulus));
    }
    if (!is_prime_modulus(p)) {
        throw std::invalid_argument("modulus must be prime, got " + std::to_string(p));
    }
    last_ok = p;
}

} // namespace

FieldElem::FieldElem(std::uint64_t value, std::uint32_t modulus)
    : value_(static_cast<std::uint32_t>(value % modulus)), modulus_(modulus) {
    require_prime(modulus);
}

void FieldElem::require_same_field(const FieldElem& o) const {
    if (modulus_ != o.modulus_) {
        throw std::invalid_argument("incompatible fields: GF(" + std::to_string(modulus_) +
                                    ") vs GF(" + std::to_string(o.modulus_) + ")");
    }
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    require_same_field(o);
    std::uint64_t s = static_cast<std::uint64_t>(value_) + o.value_;
    if (s >= modulus_) s -= modulus_;
    return FieldElem(s, modulus_);
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    require_same_field(o);
    std::uint64_t s = static_cast<std::uint64_t>(value_) + modulus_ - o.value_;
    if (s >= modulus_) s -= modulus_;
    return FieldElem(s, modulus_);
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    require_same_field(o);
    return FieldElem(static_cast<std::uint64_t>(value_) * o.value_ % modulus_, modulus_);
}

FieldElem FieldElem::operator-() const {
    return FieldElem(value_ == 0 ? 0 : modulus_ - value_, modulus_);
}

FieldElem FieldElem::inverse() const {
    if (value_ == 0) {
        throw std::domain_error("inverse of 0 in GF(" + std::to_string(modulus_) + ")");
    }
    // Extended Euclid on (value, modulus).
    std::int64_t r0 = value_, r1 = modulus_;
    std::int64_t s0 = 1, s1 = 0;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        s0 -= q * s1;
        std::swap(s0, s1);
    }
    std::int64_t inv = s0 % modulus_;
    if (inv < 0) inv += modulus_;
    return FieldElem(static_cast<std::uint64_t>(inv), modulus_);
}

std::ostream& operator<<(std::ostream& os, const FieldElem& e) {
    return os << e.value() << " (mod " << e.modulus() << ")";
}

FieldPoly::FieldPoly(std::uint32_t modulus) : modulus_(modulus) { require_prime(modulus); }

FieldPoly::FieldPoly(std::vector<FieldElem> coefficients, std::uint32_t modulus)
    : coefficients_(std::move(coefficients)), modulus_(modulus) {
    require_prime(modulus);
    for (const auto& c : coefficients_) {
        if (c.modulus() != modulus_) {
            throw std::invalid_argument("polynomial coefficient from a different field");
        }
    }
    trim();
}

FieldPoly::FieldPoly(std::initializer_list<std::uint64_t> coefficients, std::uint32_t modulus)
    : modulus_(modulus) {
    require_prime(modulus);
    coefficients_.reserve(coefficients.size());
    for (std::uint64_t c : coefficients) coefficients_.emplace_back(c, modulus);
    trim();
}

void FieldPoly::trim() {
    while (!coefficients_.empty() && coefficients_.back().value() == 0) coefficients_.pop_back();
}

FieldElem FieldPoly::coefficient(std::size_t i) const {
    if (i >= coefficients_.size()) return FieldElem(0, modulus_);
    return coefficients_[i];
}

bool FieldPoly::operator==(const FieldPoly& o) const noexcept {
    return modulus_ == o.modulus_ && coefficients_ == o.coefficients_;
}

FieldElem evaluate(const FieldPoly& poly, const FieldElem& x) {
    if (x.modulus() != poly.modulus()) {
        throw std::invalid_argument("incompatible fields: polynomial over GF(" +
                                    std::to_string(poly.modulus()) + "), point in GF(" +
                                    std::to_string(x.modulus()) + ")");
    }
    FieldElem acc(0, poly.modulus());
    const auto& cs = poly.coefficients();
    for (std::size_t i = cs.size(); i-- > 0;) {
        acc = acc * x + cs[i];
    }
    return acc;
}

FieldPoly lagrange_interpolate(const std::vector<std::pair<FieldElem, FieldElem>>& points,
                               std::uint32_t p) {
    require_prime(p);
    if (points.empty()) {
        throw std::invalid_argument("interpolation needs at least one point");
    }
    for (const auto& [x, y] : points) {
        if (x.modulus() != p || y.modulus() != p) {
            throw std::invalid_argument("interpolation point from a different field");
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].first == points[j].first) {
                throw std::invalid_argument("duplicate x-coordinate " +
                                            std::to_string(points[i].first.value()) +
                                            " in interpolation points");
            }
        }
    }

    const std::size_t n = points.size();
    std::vector<FieldElem> acc(n, FieldElem(0, p));
    std::vector<FieldElem> basis;
    basis.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // numerator prod_{j != i} (x - x_j), denominator prod (x_i - x_j)
        basis.assign(1, FieldElem(1, p));
        FieldElem denom(1, p);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const FieldElem neg_xj = -points[j].first;
            basis.push_back(FieldElem(0, p));
            for (std::size_t t = basis.size() - 1; t > 0; --t) {
                basis[t] = basis[t - 1] + neg_xj * basis[t];
            }
            basis[0] = basis[0] * neg_xj;
            denom = denom * (points[i].first - points[j].first);
        }
        const FieldElem scale = points[i].second * denom.inverse();
        for (std::size_t t = 0; t < basis.size(); ++t) {
            acc[t] = acc[t] + basis[t] * scale;
        }
    }
    return FieldPoly(std::move(acc), p);
}

FunctionTable::FunctionTable(std::vector<FieldElem> domain, std::vector<FieldElem> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (domain_.empty()) throw std::invalid_argument("function table needs a nonempty domain");
    if (domain_.size() != values_.size()) {
        throw std::invalid_argument("function table domain and value counts differ");
    }
    domain_modulus_ = domain_.front().modulus();
    value_modulus_ = values_.front().modulus();
    for (const auto& x : domain_) {
        if (x.modulus() != domain_modulus_) {
            throw std::invalid_argument("mixed moduli in table domain");
        }
    }
    for (const auto& y : values_) {
        if (y.modulus() != value_modulus_) {
            throw std::invalid_argument("mixed moduli in table values");
        }
    }
    std::unordered_set<std::uint32_t> seen;
    for (const auto& x : domain_) {
        if (!seen.insert(x.value()).second) {
            throw std::invalid_argument("duplicate domain point " + std::to_string(x.value()));
        }
    }
}

FunctionTable FunctionTable::tabulate(const FieldPoly& poly, const std::vector<FieldElem>& domain) {
    std::vector<FieldElem> values;
    values.reserve(domain.size());
    for (const auto& x : domain) values.push_back(evaluate(poly, x));
    return FunctionTable(domain, std::move(values));
}

int FunctionTable::position_of(const FieldElem& x) const noexcept {
    if (x.modulus() != domain_modulus_) return -1;
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        if (domain_[i].value() == x.value()) return static_cast<int>(i);
    }
    return -1;
}

FieldElem FunctionTable::value_at(const FieldElem& x) const {
    const int pos = position_of(x);
    if (pos < 0) {
        throw std::invalid_argument("point " + std::to_string(x.value()) + " not in table domain");
    }
    return values_[static_cast<std::size_t>(pos)];
}

Family::Family(FamilyDescriptor descriptor, std::vector<FieldPoly> polys,
               std::vector<FunctionTable> tables)
    : descriptor_(std::move(descriptor)), polys_(std::move(polys)), tables_(std::move(tables)) {
    if (polys_.size() != tables_.size()) {
        throw std::invalid_argument("family polynomial and table counts differ");
    }
}

Family enumerate_family(std::uint32_t p, std::uint32_t d, const std::vector<FieldElem>& domain,
                        std::uint64_t cap) {
    require_prime(p);
    if (domain.empty()) throw std::invalid_argument("family domain must be nonempty");
    for (const auto& x : domain) {
        if (x.modulus() != p) throw std::invalid_argument("family domain point outside GF(p)");
    }

    constexpr std::uint64_t kSaturated = ~std::uint64_t{0};
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i <= d; ++i) {
        count = (count > kSaturated / p) ? kSaturated : count * p;
    }
    if (count > cap) {
        throw BudgetError("family enumeration requires " + std::to_string(count) +
                              " tables, cap is " + std::to_string(cap),
                          count, cap);
    }

    FamilyDescriptor desc{p, d, domain};
    std::vector<FieldPoly> polys;
    std::vector<FunctionTable> tables;
    polys.reserve(count);
    tables.reserve(count);

    // Lexicographic order on (c_0, c_1, ..., c_d): the last coefficient is
    // the fastest-moving odometer digit.
    std::vector<std::uint32_t> digits(d + 1, 0);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<FieldElem> coeffs;
        coeffs.reserve(d + 1);
        for (std::uint32_t i = 0; i <= d; ++i) coeffs.emplace_back(digits[i], p);
        FieldPoly poly(std::move(coeffs), p);
        tables.push_back(FunctionTable::tabulate(poly, domain));
        polys.push_back(std::move(poly));

        for (std::size_t i = digits.size(); i-- > 0;) {
            if (++digits[i] < p) break;
            digits[i] = 0;
        }
    }
    return Family(std::move(desc), std::move(polys), std::move(tables));
}

std::vector<FieldElem> all_residues(std::uint32_t p) {
    std::vector<FieldElem> out;
    out.reserve(p);
    for (std::uint32_t v = 0; v < p; ++v) out.emplace_back(v, p);
    return out;
}

std::vector<FieldElem> residues_excluding(std::uint32_t p,
                                          const std::vector<std::uint32_t>& excluded) {
    std::vector<FieldElem> out;
    out.reserve(p);
    for (std::uint32_t v = 0; v < p; ++v) {
        if (std::find(excluded.begin(), excluded.end(), v) == excluded.end()) {
            out.emplace_back(v, p);
        }
    }
    return out;
}

} // namespace qinterp
