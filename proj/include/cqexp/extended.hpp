#pragma once

#include <cassert>
#include <cmath>
#include <limits>

namespace cqexp {

// Extended real line: a finite double or +infinity. Divergences and
// sphere-packing suprema are allowed to diverge; they are never encoded
// as large floats.
class ExtendedReal {
public:
    ExtendedReal() = default;
    ExtendedReal(double v) : value_(v) { assert(std::isfinite(v)); }

    static ExtendedReal infinity() {
        ExtendedReal r;
        r.inf_ = true;
        return r;
    }

    bool is_infinite() const { return inf_; }

    // Finite value; only meaningful when !is_infinite().
    double value() const {
        assert(!inf_);
        return value_;
    }

    // Lossy conversion for arithmetic that tolerates IEEE inf.
    double to_double() const {
        return inf_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.inf_ || b.inf_) return a.inf_ && b.inf_;
        return a.value_ == b.value_;
    }
    friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) {
        return a < b || a == b;
    }
    friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
    friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return b <= a; }

private:
    double value_ = 0.0;
    bool inf_ = false;
};

} // namespace cqexp
