#pragma once

#include <qinterp/finite_field.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qinterp {

/// A single-bit property of a function family.  Three shapes:
///   - value-bit:        P(f) = [f(z) in A] for a point z and an acceptance
///                       set A that is a proper nonempty subset of GF(p);
///   - coefficient-bit:  P(f) = [c_j in A] for a coefficient index j >= 1;
///   - parity-of-subset: P(f) = xor of f(x) over x in U, Boolean range only.
class PropertySpec {
public:
    enum class Kind { ValueBit, CoefficientBit, ParityOfSubset };

    static PropertySpec value_bit(FieldElem z, std::vector<FieldElem> accept);
    static PropertySpec coefficient_bit(std::uint32_t p, std::size_t index,
                                        std::vector<FieldElem> accept);
    static PropertySpec parity_of_subset(std::vector<FieldElem> subset);

    Kind kind() const noexcept { return kind_; }
    std::uint32_t modulus() const noexcept { return modulus_; }
    const FieldElem& point() const { return point_.front(); }
    const std::vector<FieldElem>& accept() const noexcept { return accept_; }
    std::size_t coefficient_index() const noexcept { return coeff_index_; }
    const std::vector<FieldElem>& subset() const noexcept { return subset_; }

    std::string describe() const;

private:
    PropertySpec() = default;

    Kind kind_ = Kind::ValueBit;
    std::uint32_t modulus_ = 2;
    std::vector<FieldElem> point_;  // singleton holder for z (value-bit)
    std::vector<FieldElem> accept_; // A, sorted ascending
    std::size_t coeff_index_ = 0;   // j (coefficient-bit)
    std::vector<FieldElem> subset_; // U, in given order (parity)
};

/// Evaluates the property bit on a concrete polynomial.  Throws
/// std::invalid_argument for an inapplicable spec (field mismatch, parity on
/// a non-Boolean range).
int property_value(const PropertySpec& spec, const FieldPoly& f);

/// Property bits for every family member, in member order.  Throws when the
/// spec is inapplicable (e.g. coefficient index beyond the family degree).
std::vector<std::uint8_t> classify_family(const PropertySpec& spec, const Family& family);

} // namespace qinterp
