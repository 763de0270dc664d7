#pragma once

#include "cantor/cdf.hpp"
#include "cantor/error.hpp"
#include "cantor/interval_union.hpp"
#include "cantor/rational.hpp"

namespace cantor {

/// A value of the Cantor measure: an exact rational in [0,1].
class MeasureValue {
public:
    MeasureValue() = default;
    explicit MeasureValue(Rational v) : value_(std::move(v)) {
        if (value_ < 0 || value_ > 1) throw DomainError("measure value outside [0,1]");
    }
    const Rational& value() const { return value_; }
    friend auto operator<=>(const MeasureValue& a, const MeasureValue& b) { return cmp(a.value_, b.value_) <=> 0; }
    friend bool operator==(const MeasureValue& a, const MeasureValue& b) { return a.value_ == b.value_; }

private:
    Rational value_{0};
};

/// mu(u) = sum over pieces of F(hi) - F(lo). Open versus closed ends do not matter:
/// mu has no atoms.
inline MeasureValue measure_union(const IntervalUnion& u) {
    Rational total = 0;
    for (const auto& s : u.segments()) total += cantor_cdf(s.hi) - cantor_cdf(s.lo);
    return MeasureValue(total);
}

} // namespace cantor
