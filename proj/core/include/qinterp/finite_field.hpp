#pragma once

#include <qinterp/errors.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace qinterp {

/// Trial-division primality check, valid for p <= kMaxModulus.
bool is_prime_modulus(std::uint64_t p);

inline constexpr std::uint32_t kMaxModulus = 1'000'000;

/// One residue of GF(p).  Every element carries its modulus so mixed-field
/// arithmetic is caught at the call site instead of corrupting values.
class FieldElem {
public:
    FieldElem(std::uint64_t value, std::uint32_t modulus);

    std::uint32_t value() const noexcept { return value_; }
    std::uint32_t modulus() const noexcept { return modulus_; }

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator-() const;

    /// Multiplicative inverse by extended Euclid; throws std::domain_error on 0.
    FieldElem inverse() const;

    bool operator==(const FieldElem& o) const noexcept {
        return value_ == o.value_ && modulus_ == o.modulus_;
    }
    bool operator!=(const FieldElem& o) const noexcept { return !(*this == o); }

private:
    void require_same_field(const FieldElem& o) const;

    std::uint32_t value_;
    std::uint32_t modulus_;
};

std::ostream& operator<<(std::ostream& os, const FieldElem& e);

/// Dense polynomial over GF(p), coefficients lowest degree first.  The zero
/// polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero (trimmed at construction).
class FieldPoly {
public:
    explicit FieldPoly(std::uint32_t modulus);
    FieldPoly(std::vector<FieldElem> coefficients, std::uint32_t modulus);
    FieldPoly(std::initializer_list<std::uint64_t> coefficients, std::uint32_t modulus);

    std::uint32_t modulus() const noexcept { return modulus_; }
    const std::vector<FieldElem>& coefficients() const noexcept { return coefficients_; }
    bool is_zero() const noexcept { return coefficients_.empty(); }

    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }

    /// Coefficient of x^i; 0 beyond the stored length.
    FieldElem coefficient(std::size_t i) const;

    bool operator==(const FieldPoly& o) const noexcept;

private:
    void trim();

    std::vector<FieldElem> coefficients_;
    std::uint32_t modulus_;
};

/// Horner evaluation of poly at x.  Throws std::invalid_argument when the
/// moduli disagree.
FieldElem evaluate(const FieldPoly& poly, const FieldElem& x);

/// Unique interpolating polynomial of degree < points.size() through the
/// given (x, y) pairs.  Duplicate x-coordinates raise std::invalid_argument
/// naming the offending x.
FieldPoly lagrange_interpolate(const std::vector<std::pair<FieldElem, FieldElem>>& points,
                               std::uint32_t p);

/// An explicit map from a finite ordered domain into a range field.  The
/// domain and range fields coincide for polynomial restrictions but may
/// differ (a Boolean-valued function on a larger point set keeps its domain
/// in GF(q) while the values live in GF(2)).
class FunctionTable {
public:
    FunctionTable(std::vector<FieldElem> domain, std::vector<FieldElem> values);

    /// Restriction of poly to the given domain (domain and range share the
    /// polynomial's field).
    static FunctionTable tabulate(const FieldPoly& poly, const std::vector<FieldElem>& domain);

    /// Modulus of the range field.
    std::uint32_t modulus() const noexcept { return value_modulus_; }
    std::uint32_t domain_modulus() const noexcept { return domain_modulus_; }
    const std::vector<FieldElem>& domain() const noexcept { return domain_; }
    const std::vector<FieldElem>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return domain_.size(); }

    /// Index of x in the domain sequence, or -1.
    int position_of(const FieldElem& x) const noexcept;

    /// Value at domain point x; throws std::invalid_argument when x is not
    /// in the domain.
    FieldElem value_at(const FieldElem& x) const;

    bool operator==(const FunctionTable& o) const noexcept {
        return domain_ == o.domain_ && values_ == o.values_;
    }

private:
    std::vector<FieldElem> domain_;
    std::vector<FieldElem> values_;
    std::uint32_t domain_modulus_;
    std::uint32_t value_modulus_;
};

struct FamilyDescriptor {
    std::uint32_t p = 0;
    std::uint32_t d = 0;
    std::vector<FieldElem> domain;
};

/// The enumerated collection of all degree <= d polynomials over GF(p),
/// restricted to a fixed ordered domain.  Member i corresponds to the i-th
/// coefficient vector in lexicographic order, so the generating polynomial
/// of every table stays recoverable even when distinct polynomials collide
/// on the domain.
class Family {
public:
    Family(FamilyDescriptor descriptor, std::vector<FieldPoly> polys,
           std::vector<FunctionTable> tables);

    const FamilyDescriptor& descriptor() const noexcept { return descriptor_; }
    std::size_t size() const noexcept { return tables_.size(); }
    const FunctionTable& member(std::size_t i) const { return tables_.at(i); }
    const FieldPoly& member_poly(std::size_t i) const { return polys_.at(i); }
    const std::vector<FunctionTable>& members() const noexcept { return tables_; }

private:
    FamilyDescriptor descriptor_;
    std::vector<FieldPoly> polys_;
    std::vector<FunctionTable> tables_;
};

/// All p^(d+1) coefficient vectors in lexicographic order (first coefficient
/// most significant), each tabulated on the domain.  Throws BudgetError when
/// p^(d+1) exceeds cap.
Family enumerate_family(std::uint32_t p, std::uint32_t d, const std::vector<FieldElem>& domain,
                        std::uint64_t cap = 1'000'000);

/// Helper: the ordered sequence {0, 1, ..., p-1} as field elements.
std::vector<FieldElem> all_residues(std::uint32_t p);

/// Helper: residues of GF(p) excluding the listed values, in ascending order.
std::vector<FieldElem> residues_excluding(std::uint32_t p, const std::vector<std::uint32_t>& excluded);

} // namespace qinterp
