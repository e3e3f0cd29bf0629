#include <qinterp/property.hpp>

#include <algorithm>
#include <stdexcept>

namespace qinterp {

namespace {

std::vector<FieldElem> sorted_unique(std::vector<FieldElem> values, const char* what) {
    if (values.empty()) throw std::invalid_argument(std::string(what) + " must be nonempty");
    const std::uint32_t p = values.front().modulus();
    for (const auto& v : values) {
        if (v.modulus() != p) throw std::invalid_argument(std::string(what) + " mixes fields");
    }
    std::sort(values.begin(), values.end(),
              [](const FieldElem& a, const FieldElem& b) { return a.value() < b.value(); });
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

bool contains(const std::vector<FieldElem>& sorted, const FieldElem& v) {
    return std::binary_search(sorted.begin(), sorted.end(), v,
                              [](const FieldElem& a, const FieldElem& b) {
                                  return a.value() < b.value();
                              });
}

} // namespace

PropertySpec PropertySpec::value_bit(FieldElem z, std::vector<FieldElem> accept) {
    PropertySpec spec;
    spec.kind_ = Kind::ValueBit;
    spec.modulus_ = z.modulus();
    spec.accept_ = sorted_unique(std::move(accept), "acceptance set");
    if (spec.accept_.front().modulus() != spec.modulus_) {
        throw std::invalid_argument("acceptance set from a different field than z");
    }
    if (spec.accept_.size() >= spec.modulus_) {
        throw std::invalid_argument("acceptance set must be a proper subset of GF(p)");
    }
    spec.point_.push_back(z);
    return spec;
}

PropertySpec PropertySpec::coefficient_bit(std::uint32_t p, std::size_t index,
                                           std::vector<FieldElem> accept) {
    if (index == 0) {
        throw std::invalid_argument("coefficient-bit index must be >= 1 (nonconstant coefficient)");
    }
    PropertySpec spec;
    spec.kind_ = Kind::CoefficientBit;
    spec.modulus_ = p;
    spec.coeff_index_ = index;
    spec.accept_ = sorted_unique(std::move(accept), "acceptance set");
    if (spec.accept_.front().modulus() != p) {
        throw std::invalid_argument("acceptance set from a different field");
    }
    if (spec.accept_.size() >= p) {
        throw std::invalid_argument("acceptance set must be a proper subset of GF(p)");
    }
    return spec;
}

PropertySpec PropertySpec::parity_of_subset(std::vector<FieldElem> subset) {
    PropertySpec spec;
    spec.kind_ = Kind::ParityOfSubset;
    spec.subset_ = sorted_unique(std::move(subset), "parity subset");
    spec.modulus_ = spec.subset_.front().modulus();
    return spec;
}

std::string PropertySpec::describe() const {
    switch (kind_) {
        case Kind::ValueBit:
            return "value-bit at z=" + std::to_string(point().value());
        case Kind::CoefficientBit:
            return "coefficient-bit j=" + std::to_string(coeff_index_);
        case Kind::ParityOfSubset:
            return "parity over " + std::to_string(subset_.size()) + " points";
    }
    return "?";
}

int property_value(const PropertySpec& spec, const FieldPoly& f) {
    if (f.modulus() != spec.modulus()) {
        throw std::invalid_argument("property spec and polynomial live in different fields");
    }
    switch (spec.kind()) {
        case PropertySpec::Kind::ValueBit:
            return contains(spec.accept(), evaluate(f, spec.point())) ? 1 : 0;
        case PropertySpec::Kind::CoefficientBit:
            return contains(spec.accept(), f.coefficient(spec.coefficient_index())) ? 1 : 0;
        case PropertySpec::Kind::ParityOfSubset: {
            // The subset points live in f's field; the values must be bits.
            std::uint32_t parity = 0;
            for (const auto& x : spec.subset()) {
                const std::uint32_t v = evaluate(f, x).value();
                if (v > 1) {
                    throw std::invalid_argument("parity property on a non-Boolean range: f(" +
                                                std::to_string(x.value()) + ") = " +
                                                std::to_string(v));
                }
                parity ^= v;
            }
            return static_cast<int>(parity);
        }
    }
    throw std::logic_error("unreachable property kind");
}

std::vector<std::uint8_t> classify_family(const PropertySpec& spec, const Family& family) {
    if (spec.modulus() != family.descriptor().p) {
        throw std::invalid_argument("property spec and family live in different fields");
    }
    if (spec.kind() == PropertySpec::Kind::CoefficientBit &&
        spec.coefficient_index() > family.descriptor().d) {
        throw std::invalid_argument("coefficient-bit index exceeds the family degree cap");
    }
    std::vector<std::uint8_t> bits;
    bits.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        bits.push_back(static_cast<std::uint8_t>(property_value(spec, family.member_poly(i))));
    }
    return bits;
}

} // namespace qinterp
